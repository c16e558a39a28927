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
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "daqwear/sensor.hpp"

namespace daqwear {

using Vec3 = std::array<double, 3>;

enum class ScenarioKind { kRest, kSpin, kWalk, kClimb };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name);

struct Waypoint {
  double t_s = 0.0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

inline constexpr double kStandardGravity = 9.81;
inline constexpr double kSeaLevelPressureHpa = 1013.25;
/// Height change per hPa near sea level at 10 degrees Celsius.
inline constexpr double kMetersPerHpa = 7.75;

/// A simulated measurement situation: physics plus the timing pathologies of
/// the sensor stack. Times are seconds on the device clock.
struct Scenario {
  ScenarioKind kind = ScenarioKind::kRest;
  double duration_s = 60.0;
  std::uint64_t seed = 1;

  /// Timestamp bias added to every sensor_time of a kind.
  std::array<double, kSensorKindCount> bias_ms{};
  /// Delay of a kind's first readout after its stream starts.
  std::array<double, kSensorKindCount> phase_ms{};
  double jitter_std_ms = 0.0;
  double drop_probability = 0.0;

  double gravity = kStandardGravity;
  /// Rotation of the gravity vector about the x axis (0 = face up).
  double tilt_deg = 0.0;
  double accel_noise = 0.0;
  double gyro_noise_dps = 0.0;

  double omega0_dps = 360.0;
  double tau_s = 10.0;
  double spin_radius_m = 0.02;

  /// Piecewise-linear track; empty means standing at `home`.
  std::vector<Waypoint> track;
  Waypoint home{0.0, 52.169311, 4.456711, 0.0};
  double p0_hpa = kSeaLevelPressureHpa;
  double pressure_noise_hpa = 0.0;

  double battery_start_pct = 100.0;
  double battery_drain_pct_per_h = 8.0;

  /// Scenario with the default pathology profile (bias, phase, jitter, drops).
  static Scenario preset(ScenarioKind kind, std::uint64_t seed = 1);
  /// Same physics as preset() but with perfect timing and no drops.
  static Scenario ideal(ScenarioKind kind, std::uint64_t seed = 1);
};

/// Reads `key=value` scenario text over the preset named by `scenario=`.
/// Throws std::invalid_argument on unknown keys or malformed values.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);

// Noise-free physics.

Vec3 gravity_vector(double g, double tilt_deg);

struct SpinState {
  Vec3 gyro_dps;
  Vec3 accel;
};

/// Watch spinning face-up about its z axis with exponentially decaying rate.
SpinState spin_kinematics(double t_s, double omega0_dps, double tau_s, double r_m,
                          double g = kStandardGravity);

struct TrackPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

TrackPoint track_position(const Scenario& scenario, double t_s);
double pressure_at_altitude(double alt_m, double p0_hpa = kSeaLevelPressureHpa);

struct MotionState {
  Vec3 accel;
  Vec3 gyro_dps;
};

MotionState motion_at(const Scenario& scenario, double t_s);

/// Exponential low-pass gravity estimate; linear = accel - gravity.
class GravityFilter {
 public:
  static constexpr double kAlphaPer25Ms = 0.9;

  explicit GravityFilter(std::int64_t interval_ms);

  Vec3 update(const Vec3& accel);
  const Vec3& gravity() const { return gravity_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  Vec3 gravity_{};
};

struct Readout {
  /// Central-clock time (microseconds) at which the readout reaches the app.
  std::int64_t arrival_us = 0;
  /// Absent when the readout was dropped.
  std::optional<Sample> sample;
};

/// Deterministic stream of readouts for one sensor kind. Must be advanced
/// sequentially; independent streams may be advanced from different threads.
class SensorStream {
 public:
  SensorStream(Scenario scenario, SensorKind kind, std::int64_t interval_ms,
               std::int64_t start_us = 0, std::uint64_t salt = 0);

  SensorKind kind() const { return kind_; }
  std::int64_t interval_ms() const { return interval_ms_; }
  std::int64_t next_arrival_us() const { return pending_.arrival_us; }
  std::uint64_t next_index() const { return index_; }

  Readout pop();

 private:
  Readout generate();
  Vec3 noisy(const Vec3& v, double sigma);

  Scenario scenario_;
  SensorKind kind_;
  std::int64_t interval_ms_;
  std::int64_t start_us_;
  std::uint64_t index_ = 0;
  std::int64_t last_arrival_us_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::optional<GravityFilter> filter_;
  Readout pending_;
};

/// The k-th readout of a stream started at time 0.
std::optional<Sample> next_sample(const Scenario& scenario, SensorKind kind,
                                  std::int64_t interval_ms, std::uint64_t k);

}  // namespace daqwear
