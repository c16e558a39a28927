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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace daqwear {

/// Sensor kinds in canonical order. The order is significant: it drives
/// group member ordering, file name suffixes and CSV column layout.
enum class SensorKind : std::uint8_t {
  kAccel = 0,
  kLinearAccel,
  kGyro,
  kBaro,
  kGps,
  kBattery,
};

inline constexpr std::size_t kSensorKindCount = 6;

inline constexpr std::array<SensorKind, kSensorKindCount> kAllSensorKinds = {
    SensorKind::kAccel, SensorKind::kLinearAccel, SensorKind::kGyro,
    SensorKind::kBaro,  SensorKind::kGps,         SensorKind::kBattery,
};

/// Battery is always sampled at this interval; it has no config field.
inline constexpr std::int64_t kBatteryIntervalMs = 1000;

constexpr std::size_t index_of(SensorKind kind) { return static_cast<std::size_t>(kind); }

/// Token used in file names and header `sensors=` lists.
std::string_view kind_token(SensorKind kind);
std::optional<SensorKind> kind_from_token(std::string_view token);

/// Number of value columns a sample of this kind carries.
constexpr std::size_t arity(SensorKind kind) {
  switch (kind) {
    case SensorKind::kAccel:
    case SensorKind::kLinearAccel:
    case SensorKind::kGyro:
      return 3;
    case SensorKind::kGps:
      return 2;
    case SensorKind::kBaro:
    case SensorKind::kBattery:
      return 1;
  }
  return 0;
}

/// Fixed decimals used when a value of this kind is written to disk.
constexpr int value_decimals(SensorKind kind) {
  switch (kind) {
    case SensorKind::kAccel:
    case SensorKind::kLinearAccel:
    case SensorKind::kGyro:
      return 4;
    case SensorKind::kBaro:
      return 2;
    case SensorKind::kGps:
      return 6;
    case SensorKind::kBattery:
      return 1;
  }
  return 4;
}

/// One sensor readout.
struct Sample {
  SensorKind kind = SensorKind::kAccel;
  std::uint64_t seq = 0;
  /// The sensor's own timestamp, including its per-kind bias.
  double sensor_time_ms = 0.0;
  /// Up to three values; only the first arity(kind) are meaningful.
  std::array<double, 3> values{};

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Sensors sharing one effective readout interval.
struct SensorGroup {
  std::int64_t interval_ms = 0;
  std::vector<SensorKind> members;

  friend bool operator==(const SensorGroup&, const SensorGroup&) = default;
};

}  // namespace daqwear
