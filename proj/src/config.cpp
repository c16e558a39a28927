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

#include "daqwear/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "daqwear/text.hpp"

namespace daqwear {

namespace {

constexpr std::string_view kPackageVersionKey = "package_version";
constexpr std::string_view kPersonIdKey = "person_id";
constexpr std::string_view kStartTimeKey = "start_time";

bool is_metadata_key(std::string_view key) {
  return key == kPackageVersionKey || key == kPersonIdKey || key == kStartTimeKey ||
         key == kStartClockKey || key == kStopClockKey;
}

bool valid_watch_id(std::string_view id) {
  if (id.empty() || id.size() > 16) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  });
}

// One row of the field table. `apply` validates raw text and stores it,
// returning the failure reason if the default must be kept instead.
struct FieldSpec {
  std::string_view name;
  std::function<std::optional<CorrectionReason>(Config&, std::string_view)> apply;
  std::function<std::string(const Config&)> format;
};

template <typename Member>
FieldSpec int_field(std::string_view name, Member member, int lo, int hi, bool zero_is_off) {
  return FieldSpec{
      name,
      [=](Config& c, std::string_view raw) -> std::optional<CorrectionReason> {
        auto v = text::parse_int(raw);
        if (!v) return CorrectionReason::kUnparsable;
        const bool ok = (zero_is_off && *v == 0) || (*v >= lo && *v <= hi);
        if (!ok) return CorrectionReason::kOutOfRange;
        c.*member = static_cast<std::int32_t>(*v);
        return std::nullopt;
      },
      [=](const Config& c) { return std::to_string(c.*member); },
  };
}

template <typename Member>
FieldSpec float_field(std::string_view name, Member member, double lo, double hi) {
  return FieldSpec{
      name,
      [=](Config& c, std::string_view raw) -> std::optional<CorrectionReason> {
        auto v = text::parse_double(raw);
        if (!v) return CorrectionReason::kUnparsable;
        if (!(*v >= lo && *v <= hi)) return CorrectionReason::kOutOfRange;
        c.*member = *v;
        return std::nullopt;
      },
      [=](const Config& c) { return text::format_shortest(c.*member); },
  };
}

const std::vector<FieldSpec>& field_table() {
  static const std::vector<FieldSpec> table = {
      FieldSpec{
          "watch_id",
          [](Config& c, std::string_view raw) -> std::optional<CorrectionReason> {
            if (raw.empty()) return CorrectionReason::kMissing;
            if (!valid_watch_id(raw)) return CorrectionReason::kUnparsable;
            c.watch_id = std::string(raw);
            return std::nullopt;
          },
          [](const Config& c) { return c.watch_id; },
      },
      int_field("accel_interval_ms", &Config::accel_interval_ms, 10, 1000, true),
      int_field("linear_accel_interval_ms", &Config::linear_accel_interval_ms, 10, 1000, true),
      int_field("gyro_interval_ms", &Config::gyro_interval_ms, 10, 1000, true),
      int_field("baro_interval_ms", &Config::baro_interval_ms, 10, 1000, true),
      int_field("gps_interval_s", &Config::gps_interval_s, 1, 10, true),
      float_field("privacy_lat_deg", &Config::privacy_lat_deg, -90.0, 90.0),
      float_field("privacy_lon_deg", &Config::privacy_lon_deg, -180.0, 180.0),
      int_field("privacy_radius_m", &Config::privacy_radius_m, 10, 1000, true),
      float_field("write_interval_s", &Config::write_interval_s, 0.01, 10.0),
  };
  return table;
}

struct KeyValues {
  // Last occurrence wins.
  std::map<std::string, std::string, std::less<>> values;
  std::vector<Correction> stray;
};

KeyValues split_lines(std::string_view input) {
  KeyValues out;
  for (std::string_view line : text::split_lines(input)) {
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      out.stray.push_back({"", std::string(line), "", CorrectionReason::kUnparsable});
      continue;
    }
    out.values[std::string(text::trim(line.substr(0, eq)))] =
        std::string(text::trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace

std::int64_t Config::interval_ms(SensorKind kind) const {
  switch (kind) {
    case SensorKind::kAccel: return accel_interval_ms;
    case SensorKind::kLinearAccel: return linear_accel_interval_ms;
    case SensorKind::kGyro: return gyro_interval_ms;
    case SensorKind::kBaro: return baro_interval_ms;
    case SensorKind::kGps: return std::int64_t{gps_interval_s} * 1000;
    case SensorKind::kBattery: return kBatteryIntervalMs;
  }
  return 0;
}

std::int64_t Config::write_interval_ms() const {
  return std::llround(write_interval_s * 1000.0);
}

std::string_view to_string(CorrectionReason reason) {
  switch (reason) {
    case CorrectionReason::kMissing: return "missing";
    case CorrectionReason::kOutOfRange: return "out_of_range";
    case CorrectionReason::kUnparsable: return "unparsable";
    case CorrectionReason::kUnknownKey: return "unknown_key";
  }
  return "unknown";
}

const Correction* CorrectionReport::find(std::string_view field) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const Correction& c) { return c.field == field; });
  return it == entries.end() ? nullptr : &*it;
}

ParsedConfig parse_config(std::string_view input) {
  ParsedConfig out;
  KeyValues kv = split_lines(input);
  const Config defaults;

  for (const FieldSpec& field : field_table()) {
    auto it = kv.values.find(field.name);
    std::optional<CorrectionReason> failure;
    std::string raw;
    if (it == kv.values.end()) {
      failure = CorrectionReason::kMissing;
    } else {
      raw = it->second;
      failure = field.apply(out.config, raw);
      kv.values.erase(it);
    }
    if (failure) {
      out.report.entries.push_back(
          {std::string(field.name), std::move(raw), field.format(defaults), *failure});
    }
  }

  for (auto& [key, value] : kv.values) {
    if (is_metadata_key(key)) continue;
    out.report.entries.push_back({key, value, "", CorrectionReason::kUnknownKey});
  }
  for (auto& stray : kv.stray) out.report.entries.push_back(std::move(stray));
  return out;
}

std::string serialize_config(const Config& config) {
  std::string out;
  for (const FieldSpec& field : field_table()) {
    out += field.name;
    out += '=';
    out += field.format(config);
    out += '\n';
  }
  return out;
}

std::string serialize_metafile(const Config& config, const SessionInfo& session) {
  std::string out = serialize_config(config);
  out += std::string(kPackageVersionKey) + "=" + session.package_version + "\n";
  out += std::string(kPersonIdKey) + "=" + text::zero_pad(session.person_id, 3) + "\n";
  out += std::string(kStartTimeKey) + "=" + format_iso(session.start) + "\n";
  return out;
}

Metafile parse_metafile(std::string_view input) {
  Metafile out;
  out.parsed = parse_config(input);
  const KeyValues kv = split_lines(input);
  auto get = [&](std::string_view key) -> const std::string* {
    auto it = kv.values.find(key);
    return it == kv.values.end() ? nullptr : &it->second;
  };
  const std::string* version = get(kPackageVersionKey);
  const std::string* person = get(kPersonIdKey);
  const std::string* start = get(kStartTimeKey);
  if (version && person && start) {
    auto pid = text::parse_int(*person);
    auto t = parse_iso(*start);
    if (pid && *pid >= 0 && *pid <= 999 && t) {
      out.session = SessionInfo{*version, static_cast<int>(*pid), *t};
    }
  }
  if (const std::string* v = get(kStartClockKey)) out.start_clock_ms = text::parse_int(*v);
  if (const std::string* v = get(kStopClockKey)) out.stop_clock_ms = text::parse_int(*v);
  return out;
}

std::vector<SensorGroup> sensor_groups(const Config& config) {
  std::map<std::int64_t, std::vector<SensorKind>> by_interval;
  for (SensorKind kind : kAllSensorKinds) {
    const auto interval = config.interval_ms(kind);
    if (interval != 0) by_interval[interval].push_back(kind);
  }
  std::vector<SensorGroup> groups;
  groups.reserve(by_interval.size());
  for (auto& [interval, members] : by_interval) groups.push_back({interval, std::move(members)});
  return groups;
}

std::string format_iso(WallTime t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  return text::zero_pad(static_cast<int>(ymd.year()), 4) + "-" +
         text::zero_pad(static_cast<unsigned>(ymd.month()), 2) + "-" +
         text::zero_pad(static_cast<unsigned>(ymd.day()), 2) + "T" +
         text::zero_pad(hms.hours().count(), 2) + ":" + text::zero_pad(hms.minutes().count(), 2) +
         ":" + text::zero_pad(hms.seconds().count(), 2);
}

std::optional<WallTime> parse_iso(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    return std::nullopt;
  }
  auto y = text::parse_int(s.substr(0, 4));
  auto mo = text::parse_int(s.substr(5, 2));
  auto d = text::parse_int(s.substr(8, 2));
  auto h = text::parse_int(s.substr(11, 2));
  auto mi = text::parse_int(s.substr(14, 2));
  auto se = text::parse_int(s.substr(17, 2));
  if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *se > 59 || *h < 0 || *mi < 0 || *se < 0) {
    return std::nullopt;
  }
  return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*se};
}

}  // namespace daqwear
