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

#include "daqwear/sensorsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "daqwear/geofence.hpp"
#include "daqwear/text.hpp"

namespace daqwear {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double meters_to_lat_deg(double meters) { return meters / kEarthRadiusM / kDegToRad; }

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::mt19937_64 make_engine(std::uint64_t seed, SensorKind kind, std::uint64_t salt) {
  std::seed_seq seq{lo32(seed), hi32(seed), static_cast<std::uint32_t>(index_of(kind)),
                    lo32(salt), hi32(salt)};
  return std::mt19937_64(seq);
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kRest: return "rest";
    case ScenarioKind::kSpin: return "spin";
    case ScenarioKind::kWalk: return "walk";
    case ScenarioKind::kClimb: return "climb";
  }
  return "rest";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) {
  for (auto kind : {ScenarioKind::kRest, ScenarioKind::kSpin, ScenarioKind::kWalk,
                    ScenarioKind::kClimb}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

Scenario Scenario::ideal(ScenarioKind kind, std::uint64_t seed) {
  Scenario s;
  s.kind = kind;
  s.seed = seed;
  s.accel_noise = 0.03;
  s.gyro_noise_dps = 0.05;
  s.pressure_noise_hpa = 0.01;
  switch (kind) {
    case ScenarioKind::kRest:
      s.duration_s = 300.0;
      break;
    case ScenarioKind::kSpin:
      s.duration_s = 60.0;
      break;
    case ScenarioKind::kWalk: {
      // Due north from the default circle center at walking pace; leaves a
      // 100 m circle at 100 / 1.4 s.
      s.duration_s = 120.0;
      const double speed = 1.4;
      s.track = {
          {0.0, s.home.lat_deg, s.home.lon_deg, 0.0},
          {s.duration_s, s.home.lat_deg + meters_to_lat_deg(speed * s.duration_s),
           s.home.lon_deg, 0.0},
      };
      break;
    }
    case ScenarioKind::kClimb:
      // Flat 10 s, 31 m climb over 60 s, flat 10 s.
      s.duration_s = 80.0;
      s.track = {
          {0.0, s.home.lat_deg, s.home.lon_deg, 0.0},
          {10.0, s.home.lat_deg, s.home.lon_deg, 0.0},
          {70.0, s.home.lat_deg, s.home.lon_deg, 31.0},
          {80.0, s.home.lat_deg, s.home.lon_deg, 31.0},
      };
      break;
  }
  return s;
}

Scenario Scenario::preset(ScenarioKind kind, std::uint64_t seed) {
  Scenario s = ideal(kind, seed);
  s.bias_ms = {3.0, 5.0, 7.0, 11.0, 40.0, 0.0};
  s.phase_ms = {4.0, 4.0, 6.0, 4.0, 4.0, 0.0};
  s.jitter_std_ms = 4.0;
  s.drop_probability = 0.02;
  return s;
}

// ---------------------------------------------------------------------------
// Scenario text format

namespace {

double require_double(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v) throw std::invalid_argument("scenario: bad number for " + std::string(key));
  return *v;
}

}  // namespace

Scenario parse_scenario(std::string_view input) {
  struct Entry {
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::optional<ScenarioKind> kind;
  std::uint64_t seed = 1;
  for (std::string_view line : text::split_lines(input)) {
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("scenario: expected key=value, got '" + std::string(line) + "'");
    }
    Entry e{std::string(text::trim(line.substr(0, eq))),
            std::string(text::trim(line.substr(eq + 1)))};
    if (e.key == "scenario") {
      kind = scenario_kind_from_string(e.value);
      if (!kind) throw std::invalid_argument("scenario: unknown scenario '" + e.value + "'");
    } else if (e.key == "seed") {
      auto v = text::parse_int(e.value);
      if (!v || *v < 0) throw std::invalid_argument("scenario: bad seed");
      seed = static_cast<std::uint64_t>(*v);
    } else {
      entries.push_back(std::move(e));
    }
  }
  if (!kind) throw std::invalid_argument("scenario: missing 'scenario=' line");

  Scenario s = Scenario::preset(*kind, seed);
  bool track_reset = false;
  for (const auto& [key, value] : entries) {
    if (key == "waypoint") {
      if (!track_reset) {
        s.track.clear();
        track_reset = true;
      }
      auto parts = text::split(value, ',');
      if (parts.size() != 4) throw std::invalid_argument("scenario: waypoint needs t,lat,lon,alt");
      s.track.push_back({require_double(key, text::trim(parts[0])),
                         require_double(key, text::trim(parts[1])),
                         require_double(key, text::trim(parts[2])),
                         require_double(key, text::trim(parts[3]))});
      continue;
    }
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      const std::string base = key.substr(0, dot);
      auto sensor = kind_from_token(std::string_view(key).substr(dot + 1));
      if (!sensor || (base != "bias_ms" && base != "phase_ms")) {
        throw std::invalid_argument("scenario: unknown key '" + key + "'");
      }
      auto& target = base == "bias_ms" ? s.bias_ms : s.phase_ms;
      target[index_of(*sensor)] = require_double(key, value);
      continue;
    }
    const double v = require_double(key, value);
    if (key == "duration_s") s.duration_s = v;
    else if (key == "jitter_std_ms") s.jitter_std_ms = v;
    else if (key == "drop_probability") s.drop_probability = v;
    else if (key == "gravity") s.gravity = v;
    else if (key == "tilt_deg") s.tilt_deg = v;
    else if (key == "accel_noise") s.accel_noise = v;
    else if (key == "gyro_noise_dps") s.gyro_noise_dps = v;
    else if (key == "omega0_dps") s.omega0_dps = v;
    else if (key == "tau_s") s.tau_s = v;
    else if (key == "spin_radius_m") s.spin_radius_m = v;
    else if (key == "p0_hpa") s.p0_hpa = v;
    else if (key == "pressure_noise_hpa") s.pressure_noise_hpa = v;
    else if (key == "battery_start_pct") s.battery_start_pct = v;
    else if (key == "battery_drain_pct_per_h") s.battery_drain_pct_per_h = v;
    else throw std::invalid_argument("scenario: unknown key '" + key + "'");
  }

  if (!(s.duration_s > 0.0)) throw std::invalid_argument("scenario: duration_s must be > 0");
  if (!(s.jitter_std_ms >= 0.0)) throw std::invalid_argument("scenario: jitter_std_ms < 0");
  if (!(s.drop_probability >= 0.0 && s.drop_probability < 1.0)) {
    throw std::invalid_argument("scenario: drop_probability outside [0,1)");
  }
  if (s.kind == ScenarioKind::kSpin && !(s.omega0_dps > 0.0 && s.tau_s > 0.0 &&
                                         s.spin_radius_m >= 0.0)) {
    throw std::invalid_argument("scenario: spin needs omega0_dps > 0, tau_s > 0, radius >= 0");
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  auto put = [&](std::string_view key, const std::string& value) {
    out.append(key).append("=").append(value).append("\n");
  };
  auto num = [](double v) { return text::format_shortest(v); };
  put("scenario", std::string(to_string(s.kind)));
  put("seed", std::to_string(s.seed));
  put("duration_s", num(s.duration_s));
  for (SensorKind k : kAllSensorKinds) {
    put("bias_ms." + std::string(kind_token(k)), num(s.bias_ms[index_of(k)]));
  }
  for (SensorKind k : kAllSensorKinds) {
    put("phase_ms." + std::string(kind_token(k)), num(s.phase_ms[index_of(k)]));
  }
  put("jitter_std_ms", num(s.jitter_std_ms));
  put("drop_probability", num(s.drop_probability));
  put("gravity", num(s.gravity));
  put("tilt_deg", num(s.tilt_deg));
  put("accel_noise", num(s.accel_noise));
  put("gyro_noise_dps", num(s.gyro_noise_dps));
  put("omega0_dps", num(s.omega0_dps));
  put("tau_s", num(s.tau_s));
  put("spin_radius_m", num(s.spin_radius_m));
  put("p0_hpa", num(s.p0_hpa));
  put("pressure_noise_hpa", num(s.pressure_noise_hpa));
  put("battery_start_pct", num(s.battery_start_pct));
  put("battery_drain_pct_per_h", num(s.battery_drain_pct_per_h));
  for (const Waypoint& w : s.track) {
    put("waypoint", num(w.t_s) + "," + num(w.lat_deg) + "," + num(w.lon_deg) + "," + num(w.alt_m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Physics

Vec3 gravity_vector(double g, double tilt_deg) {
  const double a = tilt_deg * kDegToRad;
  return {0.0, g * std::sin(a), g * std::cos(a)};
}

SpinState spin_kinematics(double t_s, double omega0_dps, double tau_s, double r_m, double g) {
  const double omega_dps = omega0_dps * std::exp(-t_s / tau_s);
  const double omega_rad = omega_dps * kDegToRad;
  // Specific force of a point r_m off the spin axis: centripetal toward the
  // axis (-x in the body frame) plus the support force against gravity.
  return SpinState{{0.0, 0.0, omega_dps}, {-(omega_rad * omega_rad) * r_m, 0.0, g}};
}

TrackPoint track_position(const Scenario& s, double t_s) {
  if (s.track.empty()) return {s.home.lat_deg, s.home.lon_deg, s.home.alt_m};
  const auto& tr = s.track;
  if (t_s <= tr.front().t_s) return {tr.front().lat_deg, tr.front().lon_deg, tr.front().alt_m};
  if (t_s >= tr.back().t_s) return {tr.back().lat_deg, tr.back().lon_deg, tr.back().alt_m};
  auto hi = std::upper_bound(tr.begin(), tr.end(), t_s,
                             [](double t, const Waypoint& w) { return t < w.t_s; });
  auto lo = std::prev(hi);
  const double span = hi->t_s - lo->t_s;
  const double f = span > 0.0 ? (t_s - lo->t_s) / span : 0.0;
  auto lerp = [f](double a, double b) { return a + f * (b - a); };
  return {lerp(lo->lat_deg, hi->lat_deg), lerp(lo->lon_deg, hi->lon_deg),
          lerp(lo->alt_m, hi->alt_m)};
}

double pressure_at_altitude(double alt_m, double p0_hpa) { return p0_hpa - alt_m / kMetersPerHpa; }

MotionState motion_at(const Scenario& s, double t_s) {
  if (s.kind == ScenarioKind::kSpin) {
    const SpinState spin = spin_kinematics(t_s, s.omega0_dps, s.tau_s, s.spin_radius_m, s.gravity);
    return {spin.accel, spin.gyro_dps};
  }
  return {gravity_vector(s.gravity, s.tilt_deg), {0.0, 0.0, 0.0}};
}

GravityFilter::GravityFilter(std::int64_t interval_ms)
    : alpha_(std::pow(kAlphaPer25Ms, static_cast<double>(interval_ms) / 25.0)) {}

Vec3 GravityFilter::update(const Vec3& accel) {
  Vec3 linear{};
  for (std::size_t i = 0; i < 3; ++i) {
    gravity_[i] = alpha_ * gravity_[i] + (1.0 - alpha_) * accel[i];
    linear[i] = accel[i] - gravity_[i];
  }
  return linear;
}

// ---------------------------------------------------------------------------
// Streams

SensorStream::SensorStream(Scenario scenario, SensorKind kind, std::int64_t interval_ms,
                           std::int64_t start_us, std::uint64_t salt)
    : scenario_(std::move(scenario)),
      kind_(kind),
      interval_ms_(interval_ms),
      start_us_(start_us),
      last_arrival_us_(start_us),
      rng_(make_engine(scenario_.seed, kind, salt)) {
  if (interval_ms <= 0) throw std::invalid_argument("SensorStream: interval must be > 0");
  if (kind == SensorKind::kLinearAccel) filter_.emplace(interval_ms);
  pending_ = generate();
}

Readout SensorStream::pop() {
  Readout out = std::move(pending_);
  pending_ = generate();
  return out;
}

Vec3 SensorStream::noisy(const Vec3& v, double sigma) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = v[i] + sigma * normal_(rng_);
  return out;
}

Readout SensorStream::generate() {
  const std::uint64_t k = index_++;
  const double idx = static_cast<double>(k);
  const double interval = static_cast<double>(interval_ms_);

  // Fixed draw order per readout, dropped or not.
  const bool dropped = uniform_(rng_) < scenario_.drop_probability;
  const double limit = interval / 2.0;
  const double jitter = std::clamp(scenario_.jitter_std_ms * normal_(rng_), -limit, limit);

  const double start_ms = static_cast<double>(start_us_) / 1000.0;
  const double nominal_ms = start_ms + scenario_.phase_ms[index_of(kind_)] + idx * interval;
  const double t_s = nominal_ms / 1000.0;

  Sample sample;
  sample.kind = kind_;
  sample.seq = k;
  sample.sensor_time_ms = nominal_ms + scenario_.bias_ms[index_of(kind_)] + jitter;

  switch (kind_) {
    case SensorKind::kAccel:
      sample.values = noisy(motion_at(scenario_, t_s).accel, scenario_.accel_noise);
      break;
    case SensorKind::kLinearAccel:
      sample.values = filter_->update(noisy(motion_at(scenario_, t_s).accel, scenario_.accel_noise));
      break;
    case SensorKind::kGyro:
      sample.values = noisy(motion_at(scenario_, t_s).gyro_dps, scenario_.gyro_noise_dps);
      break;
    case SensorKind::kBaro: {
      const TrackPoint p = track_position(scenario_, t_s);
      sample.values = {pressure_at_altitude(p.alt_m, scenario_.p0_hpa) +
                           scenario_.pressure_noise_hpa * normal_(rng_),
                       0.0, 0.0};
      break;
    }
    case SensorKind::kGps: {
      const TrackPoint p = track_position(scenario_, t_s);
      sample.values = {p.lat_deg, p.lon_deg, 0.0};
      break;
    }
    case SensorKind::kBattery: {
      const double pct =
          scenario_.battery_start_pct - scenario_.battery_drain_pct_per_h * t_s / 3600.0;
      sample.values = {std::clamp(pct, 0.0, 100.0), 0.0, 0.0};
      break;
    }
  }

  std::int64_t arrival_us = start_us_ + std::llround((nominal_ms - start_ms + jitter) * 1000.0);
  arrival_us = std::max(arrival_us, last_arrival_us_);
  last_arrival_us_ = arrival_us;

  Readout out;
  out.arrival_us = arrival_us;
  if (!dropped) out.sample = sample;
  return out;
}

std::optional<Sample> next_sample(const Scenario& scenario, SensorKind kind,
                                  std::int64_t interval_ms, std::uint64_t k) {
  SensorStream stream(scenario, kind, interval_ms);
  for (std::uint64_t i = 0; i < k; ++i) stream.pop();
  return stream.pop().sample;
}

}  // namespace daqwear
