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

#include "daqwear/logistics.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>

#include "daqwear/text.hpp"

namespace daqwear {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Writes `content` next to `target` as `.part`, then renames it into place.
bool write_atomically(const fs::path& target, std::string_view content, std::string& error) {
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) {
    error = ec.message();
    return false;
  }
  fs::path part = target;
  part += ".part";
  {
    std::ofstream out(part, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      error = "write failed";
      return false;
    }
  }
  fs::rename(part, target, ec);
  if (ec) {
    error = ec.message();
    return false;
  }
  return true;
}

std::string reason_of(const Json& response) {
  if (auto it = response.find("reason"); it != response.end() && it->is_string()) {
    return it->get<std::string>();
  }
  return "bad_response";
}

}  // namespace

RequestFn in_process(DeviceHost& host) {
  return [&host](const Json& request) { return handle_request(host, request).response; };
}

fs::path session_dir(const FileNameInfo& info) {
  return fs::path("P" + text::zero_pad(info.person_id, 3)) / session_stamp(info.start);
}

ScrubResult scrub_text(std::string_view input) {
  ScrubResult result;
  std::optional<SensorGroup> group;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < input.size()) {
    const std::size_t nl = input.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? input.size() : nl + 1;
    const std::string_view raw = input.substr(pos, end - pos);
    pos = end;
    ++line_no;

    std::string_view line = raw;
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line_no == 1) {
      if (auto header = parse_header(line)) group = SensorGroup{header->interval_ms, header->kinds};
      result.text += raw;
      continue;
    }
    if (line.empty()) {
      result.text += raw;
      continue;
    }
    std::optional<RowRecord> row;
    if (group) row = parse_row(line, *group);
    if (!row) {
      result.malformed_lines.push_back(line_no);
      result.text += raw;
      ++result.kept;
      continue;
    }
    if (row->label == PrivacyLabel::kPrivate) {
      ++result.removed;
      continue;
    }
    result.text += raw;
    ++result.kept;
  }
  return result;
}

PullReport pull_all(const RequestFn& request, const fs::path& out_dir, bool scrub) {
  PullReport report;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    report.failures.push_back({"", "cannot create " + out_dir.string() + ": " + ec.message()});
    return report;
  }

  const Json listing = request({{"op", "LIST_FILES"}});
  if (!listing.value("ok", false)) {
    report.failures.push_back({"", reason_of(listing)});
    return report;
  }
  const Json files = listing["payload"].value("files", Json::array());
  for (const Json& entry : files) {
    const std::string name = entry.value("name", "");
    auto info = parse_filename(name);
    if (!info) {
      report.failures.push_back({name, "unrecognized_name"});
      continue;
    }
    const Json response = request({{"op", "PULL_FILE"}, {"name", name}});
    if (!response.value("ok", false)) {
      report.failures.push_back({name, reason_of(response)});
      continue;
    }
    const Json& payload = response["payload"];
    if (!payload.contains("content") || !payload["content"].is_string()) {
      report.failures.push_back({name, "bad_response"});
      continue;
    }
    std::string content = payload["content"].get<std::string>();
    if (payload.value("size", content.size()) != content.size()) {
      report.failures.push_back({name, "size_mismatch"});
      continue;
    }

    PulledFile pulled;
    pulled.name = name;
    pulled.path = out_dir / session_dir(*info) / name;
    if (scrub && !info->metafile) {
      ScrubResult scrubbed = scrub_text(content);
      pulled.removed_rows = scrubbed.removed;
      content = std::move(scrubbed.text);
    }
    std::string error;
    if (!write_atomically(pulled.path, content, error)) {
      report.failures.push_back({name, error});
      continue;
    }
    pulled.bytes = content.size();
    report.files.push_back(std::move(pulled));
  }
  return report;
}

std::size_t ScrubReport::removed() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.removed;
  return n;
}

std::size_t ScrubReport::malformed() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.malformed_lines.size();
  return n;
}

ScrubReport scrub(const fs::path& in_tree, const fs::path& out_tree) {
  ScrubReport report;
  std::vector<fs::path> inputs;
  std::error_code ec;
  for (const auto& entry : fs::recursive_directory_iterator(in_tree, ec)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".part") continue;
    inputs.push_back(entry.path());
  }
  if (ec) report.errors.push_back(in_tree.string() + ": " + ec.message());
  std::sort(inputs.begin(), inputs.end());

  for (const fs::path& path : inputs) {
    ScrubFileReport file;
    file.relative = fs::relative(path, in_tree);
    auto content = slurp(path);
    if (!content) {
      report.errors.push_back(path.string() + ": cannot read");
      continue;
    }
    std::string output;
    if (path.extension() == ".csv") {
      ScrubResult r = scrub_text(*content);
      file.measurement = true;
      file.kept = r.kept;
      file.removed = r.removed;
      file.malformed_lines = std::move(r.malformed_lines);
      output = std::move(r.text);
    } else {
      output = std::move(*content);
    }
    std::string error;
    if (!write_atomically(out_tree / file.relative, output, error)) {
      report.errors.push_back((out_tree / file.relative).string() + ": " + error);
      continue;
    }
    report.files.push_back(std::move(file));
  }
  return report;
}

}  // namespace daqwear
