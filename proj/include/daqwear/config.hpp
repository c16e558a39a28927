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

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daqwear/sensor.hpp"

namespace daqwear {

/// Measurement configuration. Every numeric field is either inside its
/// allowed range or equal to its off-sentinel (0).
struct Config {
  std::string watch_id = "0000";
  std::int32_t accel_interval_ms = 25;
  std::int32_t linear_accel_interval_ms = 25;
  std::int32_t gyro_interval_ms = 25;
  std::int32_t baro_interval_ms = 100;
  std::int32_t gps_interval_s = 1;
  double privacy_lat_deg = 52.169311;
  double privacy_lon_deg = 4.456711;
  std::int32_t privacy_radius_m = 100;
  double write_interval_s = 0.05;

  friend bool operator==(const Config&, const Config&) = default;

  /// Effective readout interval in milliseconds, 0 when switched off.
  std::int64_t interval_ms(SensorKind kind) const;
  std::int64_t write_interval_ms() const;
  bool enabled(SensorKind kind) const { return interval_ms(kind) != 0; }
};

enum class CorrectionReason { kMissing, kOutOfRange, kUnparsable, kUnknownKey };

std::string_view to_string(CorrectionReason reason);

struct Correction {
  std::string field;
  std::string raw_text;
  std::string corrected_value;
  CorrectionReason reason = CorrectionReason::kMissing;

  friend bool operator==(const Correction&, const Correction&) = default;
};

struct CorrectionReport {
  std::vector<Correction> entries;

  bool empty() const { return entries.empty(); }
  const Correction* find(std::string_view field) const;
};

struct ParsedConfig {
  Config config;
  CorrectionReport report;
};

/// Parses config text. Never fails: missing, unparsable and out-of-range
/// fields are replaced by their defaults and listed in the report.
ParsedConfig parse_config(std::string_view text);

/// Config file text (the ten fields, one `key=value` line each).
std::string serialize_config(const Config& config);

using WallTime = std::chrono::sys_seconds;

/// Session metadata appended to a metafile.
struct SessionInfo {
  std::string package_version;
  int person_id = 0;
  WallTime start{};

  friend bool operator==(const SessionInfo&, const SessionInfo&) = default;
};

std::string serialize_metafile(const Config& config, const SessionInfo& session);

/// Central-clock bounds of a session, appended to its metafile by the
/// recorder: the start when the session opens, the stop when it closes.
inline constexpr std::string_view kStartClockKey = "start_clock_ms";
inline constexpr std::string_view kStopClockKey = "stop_clock_ms";

struct Metafile {
  ParsedConfig parsed;
  std::optional<SessionInfo> session;
  std::optional<std::int64_t> start_clock_ms;
  std::optional<std::int64_t> stop_clock_ms;
};

/// Parses a metafile: the config part as parse_config, plus the session keys
/// when all three are present and well-formed.
Metafile parse_metafile(std::string_view text);

/// Enabled sensors grouped by identical interval, ascending by interval.
/// Battery is always present at kBatteryIntervalMs.
std::vector<SensorGroup> sensor_groups(const Config& config);

/// ISO-like `YYYY-MM-DDTHH:MM:SS` (UTC).
std::string format_iso(WallTime t);
std::optional<WallTime> parse_iso(std::string_view text);

}  // namespace daqwear
