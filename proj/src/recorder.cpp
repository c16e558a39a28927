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

#include "daqwear/recorder.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "daqwear/text.hpp"

namespace daqwear {

namespace {

constexpr std::string_view kHeaderMagic = "# daqwear";

std::string date_part(WallTime t) {
  const std::string iso = format_iso(t);  // YYYY-MM-DDTHH:MM:SS
  return iso.substr(0, 4) + iso.substr(5, 2) + iso.substr(8, 2);
}

std::string time_part(WallTime t) {
  const std::string iso = format_iso(t);
  return iso.substr(11, 2) + iso.substr(14, 2) + iso.substr(17, 2);
}

std::optional<WallTime> parse_stamp(std::string_view date, std::string_view time) {
  if (date.size() != 8 || time.size() != 6) return std::nullopt;
  const std::string iso = std::string(date.substr(0, 4)) + "-" + std::string(date.substr(4, 2)) +
                          "-" + std::string(date.substr(6, 2)) + "T" +
                          std::string(time.substr(0, 2)) + ":" + std::string(time.substr(2, 2)) +
                          ":" + std::string(time.substr(4, 2));
  return parse_iso(iso);
}

std::string kinds_suffix(const std::vector<SensorKind>& kinds) {
  std::string out;
  for (SensorKind k : kinds) {
    if (!out.empty()) out += '-';
    out += kind_token(k);
  }
  return out;
}

std::optional<std::vector<SensorKind>> parse_kinds(std::string_view list) {
  std::vector<SensorKind> kinds;
  for (std::string_view token : text::split(list, '-')) {
    auto k = kind_from_token(token);
    if (!k) return std::nullopt;
    kinds.push_back(*k);
  }
  return kinds;
}

std::string stem(int person_id, WallTime start, std::string_view watch_id) {
  return "P" + text::zero_pad(person_id, 3) + "_" + date_part(start) + "_" + time_part(start) +
         "_" + std::string(watch_id);
}

std::vector<std::string_view> value_names(SensorKind kind) {
  switch (kind) {
    case SensorKind::kAccel:
    case SensorKind::kLinearAccel:
    case SensorKind::kGyro:
      return {"x", "y", "z"};
    case SensorKind::kBaro: return {"hpa"};
    case SensorKind::kGps: return {"lat", "lon"};
    case SensorKind::kBattery: return {"pct"};
  }
  return {};
}

}  // namespace

std::string make_filename(int person_id, WallTime start, std::string_view watch_id,
                          const SensorGroup& group) {
  return stem(person_id, start, watch_id) + "_" + kinds_suffix(group.members) + ".csv";
}

std::string make_metafile_name(int person_id, WallTime start, std::string_view watch_id) {
  return stem(person_id, start, watch_id) + "_meta.txt";
}

std::string session_stamp(WallTime start) { return date_part(start) + "_" + time_part(start); }

std::optional<FileNameInfo> parse_filename(std::string_view name) {
  FileNameInfo info;
  std::string_view rest;
  if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") {
    rest = name.substr(0, name.size() - 4);
  } else if (name.size() > 9 && name.substr(name.size() - 9) == "_meta.txt") {
    rest = name.substr(0, name.size() - 4);
    info.metafile = true;
  } else {
    return std::nullopt;
  }
  const auto parts = text::split(rest, '_');
  if (parts.size() != 5 || parts[0].size() != 4 || parts[0][0] != 'P') return std::nullopt;
  auto person = text::parse_int(parts[0].substr(1));
  auto start = parse_stamp(parts[1], parts[2]);
  if (!person || *person < 0 || !start || parts[3].empty()) return std::nullopt;
  info.person_id = static_cast<int>(*person);
  info.start = *start;
  info.watch_id = std::string(parts[3]);
  if (info.metafile) {
    if (parts[4] != "meta") return std::nullopt;
  } else {
    auto kinds = parse_kinds(parts[4]);
    if (!kinds) return std::nullopt;
    info.kinds = std::move(*kinds);
  }
  return info;
}

std::vector<std::string> column_schema(const SensorGroup& group) {
  std::vector<std::string> cols = {"label", "t_ms", "fresh"};
  for (SensorKind k : group.members) {
    const std::string prefix(kind_token(k));
    cols.push_back(prefix + "_seq");
    cols.push_back(prefix + "_t");
    for (std::string_view v : value_names(k)) cols.push_back(prefix + "_" + std::string(v));
  }
  return cols;
}

std::string write_header(const Config& config, const SessionInfo& session,
                         const SensorGroup& group, std::int64_t t0_ms) {
  std::string columns;
  for (const std::string& c : column_schema(group)) {
    if (!columns.empty()) columns += ',';
    columns += c;
  }
  return std::string(kHeaderMagic) + " person=" + text::zero_pad(session.person_id, 3) +
         " date=" + date_part(session.start) + " time=" + time_part(session.start) +
         " watch=" + config.watch_id + " sensors=" + kinds_suffix(group.members) +
         " interval_ms=" + std::to_string(group.interval_ms) +
         " write_interval_ms=" + std::to_string(config.write_interval_ms()) +
         " t0_ms=" + std::to_string(t0_ms) + " version=" + session.package_version +
         " columns=" + columns;
}

std::optional<FileHeader> parse_header(std::string_view line) {
  if (!text::starts_with(line, kHeaderMagic)) return std::nullopt;
  std::map<std::string, std::string, std::less<>> kv;
  for (std::string_view token : text::split(line.substr(kHeaderMagic.size()), ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    kv[std::string(token.substr(0, eq))] = std::string(token.substr(eq + 1));
  }
  auto get = [&](std::string_view key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto person = get("person");
  auto date = get("date");
  auto time = get("time");
  auto watch = get("watch");
  auto sensors = get("sensors");
  auto interval = get("interval_ms");
  auto write_interval = get("write_interval_ms");
  auto t0 = get("t0_ms");
  auto version = get("version");
  auto columns = get("columns");
  if (!person || !date || !time || !watch || !sensors || !interval || !write_interval || !t0 ||
      !version || !columns) {
    return std::nullopt;
  }
  FileHeader h;
  auto pid = text::parse_int(*person);
  auto start = parse_stamp(*date, *time);
  auto kinds = parse_kinds(*sensors);
  auto iv = text::parse_int(*interval);
  auto wiv = text::parse_int(*write_interval);
  auto t0v = text::parse_int(*t0);
  if (!pid || !start || !kinds || !iv || *iv <= 0 || !wiv || *wiv <= 0 || !t0v) {
    return std::nullopt;
  }
  h.person_id = static_cast<int>(*pid);
  h.start = *start;
  h.watch_id = *watch;
  h.kinds = std::move(*kinds);
  h.interval_ms = *iv;
  h.write_interval_ms = *wiv;
  h.t0_ms = *t0v;
  h.package_version = *version;
  for (std::string_view c : text::split(*columns, ',')) h.columns.emplace_back(c);
  return h;
}

// ---------------------------------------------------------------------------
// Rows

std::optional<RowRecord> compose_row(const SensorGroup& group, const LatestSamples& latest,
                                     const WrittenSeqs& written, std::int64_t now_ms,
                                     PrivacyLabel label) {
  RowRecord row;
  row.label = label;
  row.t_ms = now_ms;
  bool any_fresh = false;
  for (std::size_t m = 0; m < group.members.size(); ++m) {
    const auto& sample = latest[index_of(group.members[m])];
    const bool fresh = sample && (!written[m] || sample->seq > *written[m]);
    any_fresh = any_fresh || fresh;
    row.fresh.push_back(fresh);
    row.cells.push_back(sample);
  }
  if (!any_fresh) return std::nullopt;
  return row;
}

std::string format_row(const RowRecord& row, const SensorGroup& group) {
  std::string out;
  out.reserve(64);
  out += to_char(row.label);
  out += ',';
  out += std::to_string(row.t_ms);
  out += ',';
  for (bool f : row.fresh) out += f ? '1' : '0';
  for (std::size_t m = 0; m < group.members.size(); ++m) {
    const SensorKind kind = group.members[m];
    const auto& cell = row.cells[m];
    out += ',';
    if (!cell) {
      // Never seen yet: empty cells keep the column count fixed.
      out.append(1 + arity(kind), ',');
      continue;
    }
    out += std::to_string(cell->seq);
    out += ',';
    out += std::to_string(std::llround(cell->sensor_time_ms));
    for (std::size_t i = 0; i < arity(kind); ++i) {
      out += ',';
      out += text::format_fixed(cell->values[i], value_decimals(kind));
    }
  }
  out += '\n';
  return out;
}

std::optional<RowRecord> parse_row(std::string_view line, const SensorGroup& group) {
  const auto fields = text::split(line, ',');
  std::size_t expected = 3;
  for (SensorKind kind : group.members) expected += 2 + arity(kind);
  if (fields.size() != expected || fields[0].size() != 1) return std::nullopt;

  RowRecord row;
  auto label = label_from_char(fields[0][0]);
  auto t = text::parse_int(fields[1]);
  if (!label || !t || fields[2].size() != group.members.size()) return std::nullopt;
  row.label = *label;
  row.t_ms = *t;
  for (char c : fields[2]) {
    if (c != '0' && c != '1') return std::nullopt;
    row.fresh.push_back(c == '1');
  }

  std::size_t f = 3;
  for (std::size_t m = 0; m < group.members.size(); ++m) {
    const SensorKind kind = group.members[m];
    const std::size_t width = 2 + arity(kind);
    bool all_empty = true;
    for (std::size_t i = 0; i < width; ++i) all_empty = all_empty && fields[f + i].empty();
    if (all_empty) {
      if (row.fresh[m]) return std::nullopt;
      row.cells.emplace_back();
      f += width;
      continue;
    }
    Sample s;
    s.kind = kind;
    auto seq = text::parse_int(fields[f]);
    auto st = text::parse_int(fields[f + 1]);
    if (!seq || *seq < 0 || !st) return std::nullopt;
    s.seq = static_cast<std::uint64_t>(*seq);
    s.sensor_time_ms = static_cast<double>(*st);
    for (std::size_t i = 0; i < arity(kind); ++i) {
      auto v = text::parse_double(fields[f + 2 + i]);
      if (!v) return std::nullopt;
      s.values[i] = *v;
    }
    row.cells.push_back(s);
    f += width;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Mailbox

void SampleMailbox::post(const Sample& sample) {
  std::lock_guard lock(mutex_);
  latest_[index_of(sample.kind)] = sample;
}

LatestSamples SampleMailbox::snapshot() const {
  std::lock_guard lock(mutex_);
  return latest_;
}

void SampleMailbox::clear() {
  std::lock_guard lock(mutex_);
  latest_ = {};
}

// ---------------------------------------------------------------------------
// Recorder

Recorder::Recorder(std::filesystem::path data_dir, Config config, SessionInfo session,
                   std::int64_t t0_ms, std::shared_ptr<StorageBudget> budget)
    : config_(std::move(config)),
      session_(std::move(session)),
      budget_(budget ? std::move(budget) : std::make_shared<StorageBudget>()) {
  std::filesystem::create_directories(data_dir);

  metafile_path_ =
      data_dir / make_metafile_name(session_.person_id, session_.start, config_.watch_id);
  const std::string meta = serialize_metafile(config_, session_) + std::string(kStartClockKey) +
                           "=" + std::to_string(t0_ms) + "\n";
  {
    std::ofstream out(metafile_path_, std::ios::binary | std::ios::trunc);
    out << meta;
    if (!out) throw std::runtime_error("cannot write " + metafile_path_.string());
  }
  budget_->used += meta.size();

  for (const SensorGroup& group : sensor_groups(config_)) {
    MeasurementFile file;
    file.path = data_dir / make_filename(session_.person_id, session_.start, config_.watch_id, group);
    file.group = group;
    file.header_line = write_header(config_, session_, group, t0_ms);

    OpenFile open;
    open.stream.open(file.path, std::ios::binary | std::ios::trunc);
    if (!open.stream) throw std::runtime_error("cannot create " + file.path.string());
    open.stream << file.header_line << '\n';
    open.written.assign(group.members.size(), std::nullopt);
    file.fresh_cells.assign(group.members.size(), 0);
    file.bytes_written = file.header_line.size() + 1;
    budget_->used += file.bytes_written;

    files_.push_back(std::move(file));
    open_.push_back(std::move(open));
  }
}

Recorder::~Recorder() { close(); }

bool Recorder::append(std::size_t index, const std::string& row) {
  if (!budget_->try_reserve(row.size())) return false;
  auto& stream = open_[index].stream;
  stream.write(row.data(), static_cast<std::streamsize>(row.size()));
  if (!stream) {
    budget_->used -= row.size();
    stream.clear();
    return false;
  }
  files_[index].bytes_written += row.size();
  return true;
}

TickResult Recorder::writer_tick(std::int64_t now_ms, PrivacyLabel label) {
  TickResult result;
  result.rows.assign(files_.size(), 0);
  if (closed_) return result;
  const LatestSamples latest = mailbox_.snapshot();
  for (std::size_t i = 0; i < files_.size(); ++i) {
    MeasurementFile& file = files_[i];
    auto row = compose_row(file.group, latest, open_[i].written, now_ms, label);
    if (!row) continue;
    if (!append(i, format_row(*row, file.group))) {
      result.write_failed = true;
      continue;
    }
    for (std::size_t m = 0; m < file.group.members.size(); ++m) {
      if (row->cells[m]) open_[i].written[m] = row->cells[m]->seq;
      if (row->fresh[m]) ++file.fresh_cells[m];
    }
    ++file.rows_written;
    result.rows[i] = 1;
    if (observer_) observer_(file, *row);
  }
  return result;
}

void Recorder::flush() {
  for (auto& open : open_) open.stream.flush();
}

void Recorder::close(std::optional<std::int64_t> stop_ms) {
  if (closed_) return;
  for (auto& open : open_) open.stream.close();
  closed_ = true;
  if (stop_ms) {
    const std::string line = std::string(kStopClockKey) + "=" + std::to_string(*stop_ms) + "\n";
    std::ofstream out(metafile_path_, std::ios::binary | std::ios::app);
    out << line;
    if (out) budget_->used += line.size();
  }
}

double estimate_storage(double rows_per_second, double hours_per_day, double days,
                        double bytes_per_row) {
  return hours_per_day * 3600.0 * days * rows_per_second * bytes_per_row;
}

double estimate_storage(const std::vector<SensorGroup>& groups, double hours_per_day, double days,
                        double bytes_per_row) {
  double total = 0.0;
  for (const SensorGroup& g : groups) {
    total += estimate_storage(1000.0 / static_cast<double>(g.interval_ms), hours_per_day, days,
                              bytes_per_row);
  }
  return total;
}

double estimate_storage(const Config& config, double hours_per_day, double days,
                        double bytes_per_row) {
  return estimate_storage(sensor_groups(config), hours_per_day, days, bytes_per_row);
}

}  // namespace daqwear
