// Copyright 2026 The daqwear Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "daqwear/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "daqwear/sensorsim.hpp"
#include "daqwear/text.hpp"

namespace daqwear {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct SessionBounds {
  std::int64_t duration_ms = 0;
  std::optional<Config> config;
};

SessionBounds session_bounds(const std::filesystem::path& file, const MeasurementData& data,
                             std::vector<std::string>& warnings) {
  const FileHeader& h = data.header;
  const auto meta_path =
      file.parent_path() / make_metafile_name(h.person_id, h.start, h.watch_id);
  SessionBounds out;
  std::optional<std::int64_t> start;
  std::optional<std::int64_t> stop;
  if (auto text = slurp(meta_path)) {
    Metafile meta = parse_metafile(*text);
    out.config = meta.parsed.config;
    start = meta.start_clock_ms;
    stop = meta.stop_clock_ms;
  } else {
    warnings.push_back(file.filename().string() +
                       ": metafile missing, using header-declared intervals");
  }
  if (!start) start = h.t0_ms;
  if (stop) {
    out.duration_ms = *stop - *start;
  } else {
    const std::int64_t last = data.rows.empty() ? *start : data.rows.back().t_ms;
    out.duration_ms = last + h.write_interval_ms - *start;
    warnings.push_back(file.filename().string() +
                       ": session end not recorded, duration taken from the last row");
  }
  return out;
}

void density_of_file(const std::filesystem::path& file, DensityReport& report) {
  auto data = read_measurement(file);
  if (!data) {
    report.warnings.push_back(file.filename().string() + ": not a measurement file");
    return;
  }
  if (!data->malformed_lines.empty()) {
    report.warnings.push_back(file.filename().string() + ": " +
                              std::to_string(data->malformed_lines.size()) +
                              " malformed rows ignored");
  }
  const SessionBounds bounds = session_bounds(file, *data, report.warnings);
  const auto& members = data->group.members;
  std::vector<std::uint64_t> recorded(members.size(), 0);
  for (const RowRecord& row : data->rows) {
    for (std::size_t m = 0; m < members.size(); ++m) recorded[m] += row.fresh[m] ? 1 : 0;
  }
  for (std::size_t m = 0; m < members.size(); ++m) {
    SensorDensity d;
    d.file = file;
    d.kind = members[m];
    d.interval_ms = bounds.config ? bounds.config->interval_ms(members[m]) : 0;
    if (d.interval_ms <= 0) d.interval_ms = data->header.interval_ms;
    d.duration_ms = std::max<std::int64_t>(bounds.duration_ms, 0);
    d.recorded = recorded[m];
    d.expected = static_cast<std::uint64_t>(d.duration_ms / d.interval_ms);
    report.entries.push_back(d);
  }
}

}  // namespace

std::optional<MeasurementData> parse_measurement(std::string_view text) {
  const auto lines = text::split_lines(text);
  if (lines.empty()) return std::nullopt;
  auto header = parse_header(lines[0]);
  if (!header) return std::nullopt;
  MeasurementData data;
  data.group = SensorGroup{header->interval_ms, header->kinds};
  data.header = std::move(*header);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    if (auto row = parse_row(lines[i], data.group)) {
      data.rows.push_back(std::move(*row));
    } else {
      data.malformed_lines.push_back(i + 1);
    }
  }
  return data;
}

std::optional<MeasurementData> read_measurement(const std::filesystem::path& path) {
  auto text = slurp(path);
  if (!text) return std::nullopt;
  return parse_measurement(*text);
}

double SensorDensity::density() const {
  return expected == 0 ? 0.0 : static_cast<double>(recorded) / static_cast<double>(expected);
}

const SensorDensity* DensityReport::find(SensorKind kind) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const SensorDensity& d) { return d.kind == kind; });
  return it == entries.end() ? nullptr : &*it;
}

DensityReport density(const std::filesystem::path& file_or_tree) {
  DensityReport report;
  if (!std::filesystem::is_directory(file_or_tree)) {
    density_of_file(file_or_tree, report);
    return report;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(file_or_tree)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) density_of_file(f, report);
  return report;
}

std::string format_density(const DensityReport& report) {
  std::ostringstream out;
  out << "file,sensor,interval_ms,recorded,expected,density\n";
  for (const SensorDensity& d : report.entries) {
    out << d.file.filename().string() << ',' << kind_token(d.kind) << ',' << d.interval_ms << ','
        << d.recorded << ',' << d.expected << ',' << text::format_fixed(d.density(), 3) << '\n';
  }
  return out.str();
}

std::optional<kernels::Moments> gstats(const MeasurementData& data) {
  const auto& members = data.group.members;
  auto it = std::find(members.begin(), members.end(), SensorKind::kAccel);
  if (it == members.end()) return std::nullopt;
  const auto m = static_cast<std::size_t>(it - members.begin());
  std::vector<double> x, y, z;
  for (const RowRecord& row : data.rows) {
    if (!row.fresh[m] || !row.cells[m]) continue;
    x.push_back(row.cells[m]->values[0]);
    y.push_back(row.cells[m]->values[1]);
    z.push_back(row.cells[m]->values[2]);
  }
  return kernels::magnitude_moments(x, y, z);
}

std::optional<kernels::Moments> gstats(const std::filesystem::path& file) {
  auto data = read_measurement(file);
  if (!data) return std::nullopt;
  return gstats(*data);
}

double altitude(double delta_p_hpa) { return -kMetersPerHpa * delta_p_hpa; }

}  // namespace daqwear
