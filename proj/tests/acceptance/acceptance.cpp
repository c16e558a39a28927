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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "daqwear/analysis.hpp"
#include "daqwear/config.hpp"
#include "daqwear/geofence.hpp"
#include "daqwear/logistics.hpp"
#include "daqwear/service.hpp"
#include "daqwear/simrun.hpp"
#include "daqwear/text.hpp"
#include "testing.hpp"

using namespace daqwear;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed checks for one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ |= !ok;
  }
  void note(const std::string& s) { notes_.push_back(s); }

  Outcome outcome() const {
    Outcome o{!failed_, {}};
    const auto& parts = failed_ ? failures_ : notes_;
    for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? "; " : "") + parts[i];
    return o;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fixed(double v, int decimals) { return text::format_fixed(v, decimals); }

SimRunResult simulate(SimRunOptions o) {
  o.log_mode = LogMode::kRelease;
  return sim_run(o);
}

std::vector<fs::path> files_with_suffix(const fs::path& root, std::string_view suffix) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename().string().ends_with(suffix)) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> member_index(const SensorGroup& g, SensorKind kind) {
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    if (g.members[i] == kind) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 1. Config totality and fidelity

bool in_table2_range(const Config& c) {
  auto interval_ok = [](std::int64_t v) { return v == 0 || (v >= 10 && v <= 1000); };
  return interval_ok(c.accel_interval_ms) && interval_ok(c.linear_accel_interval_ms) &&
         interval_ok(c.gyro_interval_ms) && interval_ok(c.baro_interval_ms) &&
         (c.gps_interval_s == 0 || (c.gps_interval_s >= 1 && c.gps_interval_s <= 10)) &&
         c.privacy_lat_deg >= -90.0 && c.privacy_lat_deg <= 90.0 &&
         c.privacy_lon_deg >= -180.0 && c.privacy_lon_deg <= 180.0 &&
         (c.privacy_radius_m == 0 || (c.privacy_radius_m >= 10 && c.privacy_radius_m <= 1000)) &&
         c.write_interval_s >= 0.01 && c.write_interval_s <= 10.0 && !c.watch_id.empty() &&
         c.watch_id.size() <= 16;
}

std::string fuzz_input(std::mt19937_64& rng, const std::string& base) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s;
  switch (rng() % 3) {
    case 0:
      for (int n = static_cast<int>(rng() % 512); n > 0; --n) s += static_cast<char>(byte(rng));
      break;
    case 1:
      s = base;
      for (int n = 1 + static_cast<int>(rng() % 16); n > 0; --n) {
        s[rng() % s.size()] = static_cast<char>(byte(rng));
      }
      break;
    default: {
      static const char* keys[] = {"watch_id", "accel_interval_ms", "linear_accel_interval_ms",
                                   "gyro_interval_ms", "baro_interval_ms", "gps_interval_s",
                                   "privacy_lat_deg", "privacy_lon_deg", "privacy_radius_m",
                                   "write_interval_s", "", "#x", "=="};
      static const char* values[] = {"", "0", "-0", "10", "1000", "1001", "9", "0.01", "1e400",
                                     "nan", "-inf", "0x1A", " 25 ", "25ms", "D8F8", "\xc3\x28",
                                     "99999999999999999999", "-90.0000001", "180", "a=b"};
      for (int n = static_cast<int>(rng() % 30); n > 0; --n) {
        s += keys[rng() % std::size(keys)];
        s += '=';
        s += values[rng() % std::size(values)];
        s += (rng() % 2) ? "\n" : "\r\n";
      }
    }
  }
  return s;
}

Outcome criterion1() {
  Checker c;
  const Config d;
  c.expect(d.watch_id == "0000" && d.accel_interval_ms == 25 && d.linear_accel_interval_ms == 25 &&
               d.gyro_interval_ms == 25 && d.baro_interval_ms == 100 && d.gps_interval_s == 1 &&
               d.privacy_lat_deg == 52.169311 && d.privacy_lon_deg == 4.456711 &&
               d.privacy_radius_m == 100 && d.write_interval_s == 0.05,
           "default Config differs from Table 2");
  c.expect(parse_config("").config == d, "empty input does not give the defaults");

  std::mt19937_64 rng(1);
  const std::string base = serialize_config(d);
  const SessionInfo session{"1.0.0", 17, *parse_iso("2022-06-01T09:30:00")};
  int failures = 0;
  for (int i = 0; i < 10'000; ++i) {
    const std::string input = fuzz_input(rng, base);
    try {
      const ParsedConfig parsed = parse_config(input);
      const std::string meta = serialize_metafile(parsed.config, session);
      const ParsedConfig again = parse_config(meta);
      const Metafile mf = parse_metafile(meta);
      if (!in_table2_range(parsed.config) || again.config != parsed.config ||
          !again.report.empty() || !mf.session || *mf.session != session) {
        ++failures;
      }
    } catch (...) {
      ++failures;
    }
  }
  c.expect(failures == 0, std::to_string(failures) + " of 10000 fuzz inputs failed");

  // Lossless metafile round trip of random in-range configs.
  int lossy = 0;
  for (int i = 0; i < 2000; ++i) {
    Config x;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    x.watch_id = "W" + std::to_string(pick(0, 99999));
    x.accel_interval_ms = pick(0, 3) ? pick(10, 1000) : 0;
    x.linear_accel_interval_ms = pick(10, 1000);
    x.gyro_interval_ms = pick(0, 3) ? pick(10, 1000) : 0;
    x.baro_interval_ms = pick(10, 1000);
    x.gps_interval_s = pick(0, 10);
    x.privacy_lat_deg = std::uniform_real_distribution<double>(-90, 90)(rng);
    x.privacy_lon_deg = std::uniform_real_distribution<double>(-180, 180)(rng);
    x.privacy_radius_m = pick(0, 3) ? pick(10, 1000) : 0;
    x.write_interval_s = std::uniform_real_distribution<double>(0.01, 10)(rng);
    if (parse_config(serialize_metafile(x, session)).config != x) ++lossy;
  }
  c.expect(lossy == 0, std::to_string(lossy) + " of 2000 metafile round trips lossy");
  c.note("10000 fuzz inputs, 0 failures; defaults = Table 2; 2000 metafile round trips lossless");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 2. Geofence

double cosine_law_m(double lat1, double lon1, double lat2, double lon2) {
  const double r = std::numbers::pi / 180.0;
  const double x = std::sin(lat1 * r) * std::sin(lat2 * r) +
                   std::cos(lat1 * r) * std::cos(lat2 * r) * std::cos((lon2 - lon1) * r);
  return 6'371'000.0 * std::acos(std::clamp(x, -1.0, 1.0));
}

Outcome criterion2() {
  Checker c;
  const double lat = 52.169311, lon = 4.456711;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> off(-0.004, 0.004);
  std::uniform_int_distribution<int> radius(10, 1000);
  int mismatches = 0, compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const PrivacyCircle circle{lat, lon, radius(rng)};
    const GpsFix fix{lat + off(rng), lon + off(rng), 0, true};
    const double d = cosine_law_m(fix.lat_deg, fix.lon_deg, lat, lon);
    // The two formulas differ by far less than a millimeter here.
    if (std::abs(d - circle.radius_m) < 1e-3) continue;
    ++compared;
    const PrivacyLabel expected = d <= circle.radius_m ? PrivacyLabel::kInside : PrivacyLabel::kPrivate;
    mismatches += label(fix, circle) != expected;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " label mismatches");
  c.expect(compared >= 990, "too many boundary fixes skipped");

  const PrivacyCircle circle{lat, lon, 100};
  c.expect(label(std::nullopt, circle) == PrivacyLabel::kUnknown, "absent fix not '?'");
  c.expect(label(GpsFix{lat, lon, 0, false}, circle) == PrivacyLabel::kUnknown, "invalid fix not '?'");
  c.expect(label(GpsFix{lat, lon, 0, true}, circle) == PrivacyLabel::kInside, "center not 'I'");

  double worst = 0.0;
  for (auto [lat2, lon2] : {std::pair{lat + 0.001, lon}, std::pair{lat, lon + 0.001},
                            std::pair{lat + 0.002, lon}}) {
    const double ours = distance_m(lat, lon, lat2, lon2);
    const double geodesic = testkit::vincenty_m(lat, lon, lat2, lon2);
    worst = std::max(worst, std::abs(ours - geodesic) / geodesic);
  }
  c.expect(worst < 0.005, "haversine vs geodesic off by " + fixed(worst * 100, 3) + "%");
  c.note(std::to_string(compared) + " fixes agree with the cosine-law oracle; worst geodesic error " +
         fixed(worst * 100, 3) + "% (< 0.5%)");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 3. Density

const char* kLosslessConfig =
    "watch_id=D8F8\naccel_interval_ms=25\nlinear_accel_interval_ms=25\ngyro_interval_ms=25\n"
    "baro_interval_ms=25\ngps_interval_s=0\nwrite_interval_s=0.025\n";

Outcome criterion3() {
  Checker c;
  std::ostringstream summary;
  {
    testkit::TempDir dir;
    SimRunOptions o;
    o.scenario = Scenario::ideal(ScenarioKind::kRest, 3);
    o.duration_ms = 60'000;
    o.config_text = kLosslessConfig;
    o.out_dir = dir / "tree";
    simulate(o);
    const DensityReport r = density(o.out_dir);
    c.expect(r.warnings.empty(), "density warnings in the lossless run");
    for (SensorKind k : {SensorKind::kAccel, SensorKind::kLinearAccel, SensorKind::kGyro,
                         SensorKind::kBaro}) {
      const SensorDensity* e = r.find(k);
      c.expect(e && e->expected == 2400 && e->recorded == e->expected,
               "lossless " + std::string(kind_token(k)) + " density " +
                   (e ? fixed(e->density(), 4) : "missing"));
    }
    summary << "lossless 1.000 x4";
  }
  {
    testkit::TempDir dir;
    SimRunOptions o;
    o.scenario = Scenario::ideal(ScenarioKind::kRest, 4);
    o.scenario.drop_probability = 0.03;
    o.duration_ms = 60'000;
    o.config_text = kLosslessConfig;
    o.out_dir = dir / "tree";
    simulate(o);
    const DensityReport r = density(o.out_dir);
    summary << "; p=0.03:";
    for (SensorKind k : {SensorKind::kAccel, SensorKind::kLinearAccel, SensorKind::kGyro,
                         SensorKind::kBaro}) {
      const SensorDensity* e = r.find(k);
      const double d = e ? e->density() : 0.0;
      c.expect(e && std::abs(d - 0.97) <= 0.01,
               "drop run " + std::string(kind_token(k)) + " density " + fixed(d, 4));
      summary << " " << fixed(d, 3);
    }
  }
  {
    // Default pathology profile, 25 ms sensors and writer.
    testkit::TempDir dir;
    SimRunOptions o;
    o.scenario = Scenario::preset(ScenarioKind::kRest, 5);
    o.duration_ms = 60'000;
    o.config_text = "watch_id=D8F8\nwrite_interval_s=0.025\n";
    o.out_dir = dir / "tree";
    simulate(o);
    const DensityReport r = density(o.out_dir);
    summary << "; preset:";
    for (const SensorDensity& e : r.entries) {
      const double d = e.density();
      c.expect(d > 0.80 && d <= 1.00,
               "preset " + std::string(kind_token(e.kind)) + " density " + fixed(d, 4));
      summary << " " << kind_token(e.kind) << "=" << fixed(d, 3);
    }
    c.expect(!r.entries.empty(), "preset run produced no density entries");
  }
  c.note(summary.str());
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 4. Baseline G

Outcome criterion4() {
  Checker c;
  double lo_mean = 1e9, hi_mean = 0, lo_std = 1e9, hi_std = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    testkit::TempDir dir;
    SimRunOptions o;
    o.scenario = Scenario::preset(ScenarioKind::kRest, seed);
    o.duration_ms = 300'000;
    o.config_text = "watch_id=D8F8\nwrite_interval_s=0.025\n";
    o.out_dir = dir / "tree";
    simulate(o);
    const auto files = files_with_suffix(o.out_dir, ".csv");
    std::optional<kernels::Moments> m;
    for (const auto& f : files) {
      if (f.filename().string().find("_accel") != std::string::npos) m = gstats(f);
    }
    c.expect(m.has_value(), "seed " + std::to_string(seed) + ": no accel file");
    if (!m) continue;
    c.expect(o.scenario.accel_noise == 0.03, "rest sigma is not 0.03");
    c.expect(m->mean >= 9.6 && m->mean <= 10.2,
             "seed " + std::to_string(seed) + ": mean " + fixed(m->mean, 4));
    c.expect(m->stddev >= 0.02 && m->stddev <= 0.036,
             "seed " + std::to_string(seed) + ": std " + fixed(m->stddev, 4));
    lo_mean = std::min(lo_mean, m->mean);
    hi_mean = std::max(hi_mean, m->mean);
    lo_std = std::min(lo_std, m->stddev);
    hi_std = std::max(hi_std, m->stddev);
  }
  c.note("10 seeds x 300 s: mean " + fixed(lo_mean, 4) + ".." + fixed(hi_mean, 4) + ", std " +
         fixed(lo_std, 4) + ".." + fixed(hi_std, 4));
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 5. Spin physics

Outcome criterion5() {
  Checker c;
  SimRunOptions o;
  o.scenario = Scenario::ideal(ScenarioKind::kSpin, 6);
  o.scenario.accel_noise = 0.0;
  o.scenario.gyro_noise_dps = 0.0;
  o.scenario.pressure_noise_hpa = 0.0;
  o.duration_ms = o.scenario.duration_s * 1000;
  o.config_text = "watch_id=D8F8\nwrite_interval_s=0.025\n";
  const double r_m = o.scenario.spin_radius_m;

  std::size_t rows = 0, gyro_violations = 0, inplane_violations = 0, az_violations = 0;
  double worst_rel = 0.0, linear_sum = 0.0;
  std::size_t linear_n = 0;
  std::optional<double> last_gz;
  o.row_observer = [&](const MeasurementFile& f, const RowRecord& row) {
    const auto ia = member_index(f.group, SensorKind::kAccel);
    const auto ig = member_index(f.group, SensorKind::kGyro);
    const auto il = member_index(f.group, SensorKind::kLinearAccel);
    if (ig && row.fresh[*ig]) {
      const double gz = row.cells[*ig]->values[2];
      if (last_gz && gz > *last_gz) ++gyro_violations;
      last_gz = gz;
    }
    if (ia && ig && row.fresh[*ia] && row.fresh[*ig]) {
      ++rows;
      const auto& a = row.cells[*ia]->values;
      const double omega = row.cells[*ig]->values[2] * std::numbers::pi / 180.0;
      const double expected = omega * omega * r_m;
      const double rel = std::abs(std::hypot(a[0], a[1]) - expected) / expected;
      worst_rel = std::max(worst_rel, rel);
      inplane_violations += rel > 1e-6;
      az_violations += std::abs(a[2] - 9.81) > 1e-12;
    }
    if (il && row.fresh[*il] && row.t_ms >= 32'000) {
      const auto& l = row.cells[*il]->values;
      linear_sum += std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
      ++linear_n;
    }
  };
  simulate(o);
  c.expect(rows > 1000, "only " + std::to_string(rows) + " spin rows");
  c.expect(gyro_violations == 0, std::to_string(gyro_violations) + " gyro z increases");
  c.expect(inplane_violations == 0, std::to_string(inplane_violations) +
                                        " rows beyond 1e-6 relative error (worst " +
                                        std::to_string(worst_rel) + ")");
  c.expect(az_violations == 0, std::to_string(az_violations) + " rows with az != 9.81");
  const double spin_linear = linear_n ? linear_sum / static_cast<double>(linear_n) : 1e9;
  c.expect(spin_linear < 0.05, "spin linear residual mean " + fixed(spin_linear, 4));

  // The same settling requirement on a rest stream with sensor noise.
  SensorStream rest(Scenario::ideal(ScenarioKind::kRest, 6), SensorKind::kLinearAccel, 25);
  double rest_sum = 0.0;
  std::size_t rest_n = 0;
  while (rest.next_arrival_us() < 120'000'000) {
    const Readout r = rest.pop();
    if (r.sample && r.sample->sensor_time_ms >= 32'000) {
      const auto& l = r.sample->values;
      rest_sum += std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
      ++rest_n;
    }
  }
  const double rest_linear = rest_sum / static_cast<double>(rest_n);
  c.expect(rest_linear < 0.05, "rest linear residual mean " + fixed(rest_linear, 4));

  std::ostringstream s;
  s << rows << " rows, gyro z non-increasing, worst in-plane rel error " << worst_rel
    << ", az = 9.81, linear residual after 32 s: spin " << fixed(spin_linear, 4) << " rest "
    << fixed(rest_linear, 4);
  c.note(s.str());
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 6. Barometer and altitude

Outcome criterion6() {
  Checker c;
  c.expect(altitude(-2.0) == 15.5, "altitude(-2.0) = " + text::format_shortest(altitude(-2.0)));

  testkit::TempDir dir;
  SimRunOptions o;
  o.scenario = Scenario::preset(ScenarioKind::kClimb, 7);
  o.duration_ms = 80'000;
  o.out_dir = dir / "tree";
  simulate(o);
  const auto baro = files_with_suffix(o.out_dir, "_baro.csv");
  c.expect(baro.size() == 1, "expected one baro file");
  double before = 0.0, after = 0.0;
  std::size_t nb = 0, na = 0;
  if (baro.size() == 1) {
    const auto data = read_measurement(baro[0]);
    c.expect(data.has_value(), "baro file unreadable");
    if (data) {
      for (const RowRecord& row : data->rows) {
        if (!row.fresh[0]) continue;
        const double p = row.cells[0]->values[0];
        const double t = row.cells[0]->sensor_time_ms;
        if (t < 10'000) {
          before += p;
          ++nb;
        } else if (t > 70'000) {
          after += p;
          ++na;
        }
      }
    }
  }
  c.expect(nb > 50 && na > 50, "too few flat-segment samples");
  const double delta = nb && na ? after / na - before / nb : 0.0;
  c.expect(std::abs(delta - (-4.0)) <= 3 * 0.01, "pressure change " + fixed(delta, 4) + " hPa");
  c.note("altitude(-2.0) = 15.5 m; climb of 31 m: " + fixed(delta, 4) + " hPa (target -4.0 +- 0.03)");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 7. Storage claim

Outcome criterion7() {
  Checker c;
  const double bytes = estimate_storage(50.0, 12.0, 7.0, 33.0);
  c.expect(std::abs(bytes - 50.0 * 43'200 * 7 * 33) < 1e-3, "formula mismatch at 33 B/row");
  c.expect(std::abs(bytes / 1e6 - 499.0) < 0.5, "estimate " + fixed(bytes / 1e6, 1) + " MB");

  std::ostringstream out, err;
  const int code = cli::run({"estimate", "--hours", "12", "--days", "7", "--row-bytes", "33"}, out, err);
  c.expect(code == 0, "estimate exit " + std::to_string(code));
  c.expect(out.str().find("499.0 MB") != std::string::npos, "CLI does not print 499.0 MB");
  c.expect(out.str().find("fits in 500 MB: yes") != std::string::npos, "CLI does not print the fit");

  // Our own rows: a default-config run with the writer at 20 ms, one motion
  // row per writer tick (50 rows per second).
  SimRunOptions o;
  o.scenario = Scenario::preset(ScenarioKind::kRest, 8);
  o.duration_ms = 60'000;
  o.config_text = "watch_id=D8F8\nwrite_interval_s=0.02\naccel_interval_ms=20\n"
                  "linear_accel_interval_ms=20\ngyro_interval_ms=20\n";
  const SimRunResult r = simulate(o);
  std::uint64_t motion_rows = 0, motion_bytes = 0;
  for (const MeasurementFile& f : r.files) {
    if (member_index(f.group, SensorKind::kAccel)) {
      motion_rows += f.rows_written;
      motion_bytes += f.bytes_written - f.header_line.size() - 1;
    }
  }
  const double measured = motion_rows ? static_cast<double>(motion_bytes) / motion_rows : 0.0;
  const double ours = estimate_storage(50.0, 12.0, 7.0, measured);
  c.expect(motion_rows > 0, "no motion rows recorded");
  c.expect(std::abs(ours - 50.0 * 43'200 * 7 * measured) <= 1e-9 * ours,
           "formula mismatch at measured bytes/row");
  c.note("33 B/row -> " + fixed(bytes / 1e6, 1) + " MB, fits in 500 MB; measured " +
         fixed(measured, 1) + " B/row -> " + fixed(ours / 1e6, 1) + " MB (fit " +
         (ours <= 500e6 ? "yes" : "no") + ", formula asserted)");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 8. Logistics and privacy

std::size_t count_p_rows(const std::string& content) {
  std::size_t n = 0;
  bool first = true;
  for (std::string_view line : text::split_lines(content)) {
    if (!first && !line.empty() && line[0] == 'P') ++n;
    first = false;
  }
  return n;
}

Outcome criterion8() {
  Checker c;
  testkit::TempDir dir;
  DeviceOptions opts;
  opts.root = dir / "device";
  opts.boot_time = *parse_iso("2022-06-01T09:30:00");
  opts.scenario = Scenario::preset(ScenarioKind::kWalk, 9);
  opts.log_mode = LogMode::kRelease;
  DeviceHost host(opts);

  // Flip time from the rows of the first session.
  const double speed = 1.4;
  const double crossing_ms = 100.0 / speed * 1000.0;
  std::optional<std::int64_t> flip_ms, last_inside_ms;
  bool relapse = false;
  host.with_device([&](Device& d) {
    d.set_row_observer([&](const MeasurementFile&, const RowRecord& row) {
      if (d.recorder() == nullptr || d.recorder()->session().person_id != 1) return;
      if (row.label == PrivacyLabel::kPrivate && !flip_ms) flip_ms = row.t_ms;
      if (row.label == PrivacyLabel::kInside) {
        last_inside_ms = row.t_ms;
        if (flip_ms) relapse = true;
      }
    });
    run(d, RunPlan{{{0, RestartMessage{1}},
                    {95'000, RestartMessage{2}},
                    {3'600'000, RestartMessage{1}},
                    {3'700'000, RestartMessage{30}}},
                   3'710'000,
                   true});
  });
  const std::int64_t window_ms = kFixStalenessIntervals * 1000;
  c.expect(flip_ms.has_value(), "no I->P flip in the walk");
  if (flip_ms) {
    c.expect(*flip_ms >= crossing_ms && *flip_ms <= crossing_ms + window_ms,
             "flip at " + std::to_string(*flip_ms) + " ms, crossing at " + fixed(crossing_ms, 0));
  }
  c.expect(!relapse, "inside rows after the flip");

  const fs::path pulled = dir / "pulled";
  const PullReport pr = pull_all(in_process(host), pulled);
  c.expect(pr.ok(), "pull failures");

  // Two levels: person, then session stamp; then files.
  std::map<std::string, std::vector<std::string>> sessions;
  std::size_t misplaced = 0;
  for (const auto& [rel, content] : testkit::tree_contents(pulled)) {
    const fs::path p(rel);
    const std::vector<std::string> parts(p.begin(), p.end());
    if (parts.size() != 3) {
      ++misplaced;
      continue;
    }
    const auto info = parse_filename(parts[2]);
    if (!info || parts[0] != "P" + text::zero_pad(info->person_id, 3) ||
        parts[1] != session_stamp(info->start)) {
      ++misplaced;
    }
    auto& v = sessions[parts[0]];
    if (std::find(v.begin(), v.end(), parts[1]) == v.end()) v.push_back(parts[1]);
  }
  c.expect(misplaced == 0, std::to_string(misplaced) + " files outside person/session layout");
  c.expect(sessions.size() == 3 && sessions["P001"].size() == 2, "unexpected person/session set");

  // Lexicographic order equals chronological order, across an hour rollover.
  std::vector<std::pair<std::string, WallTime>> all;
  for (const auto& [person, stamps] : sessions) {
    for (const auto& s : stamps) {
      for (const PulledFile& f : pr.files) {
        if (f.path.parent_path().filename() == s) {
          all.emplace_back(s, parse_filename(f.name)->start);
          break;
        }
      }
    }
  }
  auto lex = all, chrono = all;
  std::sort(lex.begin(), lex.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::sort(chrono.begin(), chrono.end(), [](auto& a, auto& b) { return a.second < b.second; });
  c.expect(lex == chrono && all.size() == 4, "lexicographic order is not chronological");

  // Scrub removes exactly the P rows and nothing else.
  const ScrubReport sr = scrub(pulled, dir / "clean");
  std::size_t p_rows = 0, other_diff = 0;
  for (const auto& [rel, content] : testkit::tree_contents(pulled)) {
    const std::string cleaned = testkit::read_file(dir / "clean" / rel);
    if (!rel.ends_with(".csv")) {
      other_diff += cleaned != content;
      continue;
    }
    p_rows += count_p_rows(content);
    std::string expected;
    bool first = true;
    for (std::string_view line : text::split_lines(content)) {
      if (first || line.empty() || line[0] != 'P') expected += std::string(line) + "\n";
      first = false;
    }
    other_diff += cleaned != expected;
  }
  c.expect(p_rows > 0, "walk produced no P rows");
  c.expect(sr.removed() == p_rows, "scrub removed " + std::to_string(sr.removed()) + " of " +
                                       std::to_string(p_rows) + " P rows");
  c.expect(other_diff == 0, std::to_string(other_diff) + " files differ beyond P rows");

  const auto h1 = testkit::tree_digest(dir / "clean");
  scrub(dir / "clean", dir / "clean2");
  c.expect(testkit::tree_digest(dir / "clean2") == h1, "second scrub changed the tree");

  c.note("flip at " + (flip_ms ? std::to_string(*flip_ms) : std::string("-")) + " ms vs crossing " +
         fixed(crossing_ms, 0) + " ms (window " + std::to_string(window_ms) + " ms); " +
         std::to_string(pr.files.size()) + " files in 3 persons / 4 sessions; scrub removed " +
         std::to_string(sr.removed()) + " P rows, idempotent");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 9. State machine

enum class Step { kRestartA, kRestartB, kClean, kShutdown };

const char* kConfigA = "watch_id=D8F8\naccel_interval_ms=25\ngyro_interval_ms=25\n";
const char* kConfigB = "watch_id=D8F8\naccel_interval_ms=50\ngyro_interval_ms=0\n";

Outcome criterion9() {
  Checker c;
  // Pure transition table, every sequence up to length 6.
  const std::vector<ControlMessage> alphabet = {RestartMessage{0}, RestartMessage{999},
                                                RestartMessage{1000}, CleanMessage{}};
  std::size_t table_sequences = 0, table_bad = 0;
  std::function<void(DeviceState, int)> walk = [&](DeviceState s, int depth) {
    if (depth == 6) return;
    for (const ControlMessage& m : alphabet) {
      ++table_sequences;
      const Transition t = handle(s, m);
      const bool deletes = std::find(t.actions.begin(), t.actions.end(),
                                     Action::kDeleteAllFiles) != t.actions.end();
      if (s == DeviceState::kMeasuring && t.next != DeviceState::kMeasuring && !deletes) ++table_bad;
      if (std::holds_alternative<CleanMessage>(m) && !deletes) ++table_bad;
      walk(t.next, depth + 1);
    }
  };
  walk(DeviceState::kBootedIdle, 0);
  c.expect(table_sequences == 5460, "table sequences " + std::to_string(table_sequences));
  c.expect(table_bad == 0, std::to_string(table_bad) + " table transitions violate the rules");

  // Real devices, every sequence of length 6 (which covers all prefixes).
  const std::vector<Step> steps = {Step::kRestartA, Step::kRestartB, Step::kClean, Step::kShutdown};
  testkit::TempDir dir;
  std::size_t devices = 0, bad = 0;
  std::string first_bad;
  std::vector<int> seq(6, 0);
  for (int code = 0; code < 4096; ++code) {
    int x = code;
    for (int& s : seq) {
      s = x % 4;
      x /= 4;
    }
    DeviceOptions o;
    o.root = dir / std::to_string(code);
    o.boot_time = *parse_iso("2022-06-01T09:30:00");
    o.scenario = Scenario::ideal(ScenarioKind::kRest);
    o.log_mode = LogMode::kRelease;
    Device d(o);
    ++devices;
    std::string trace;
    auto fail = [&](const std::string& why) {
      ++bad;
      if (first_bad.empty()) first_bad = trace + ": " + why;
    };
    for (int i = 0; i < 6; ++i) {
      const Step step = steps[seq[i]];
      trace += "ABCS"[seq[i]];
      const DeviceState before = d.state();
      const std::size_t files_before = d.list_files().size();
      switch (step) {
        case Step::kRestartA:
          d.push_config(kConfigA);
          d.send(RestartMessage{1});
          break;
        case Step::kRestartB:
          d.push_config(kConfigB);
          d.send(RestartMessage{2});
          break;
        case Step::kClean:
          d.send(CleanMessage{});
          break;
        case Step::kShutdown:
          d.shutdown();
          break;
      }
      d.advance_by_ms(200);
      const DeviceState after = d.state();
      const auto files = d.list_files();
      if (before == DeviceState::kShutDown) {
        if (after != DeviceState::kShutDown || files.size() != files_before) fail("acted after shutdown");
        continue;
      }
      if (before == DeviceState::kMeasuring && after != DeviceState::kMeasuring &&
          !files.empty() && after != DeviceState::kShutDown) {
        fail("recording stopped with files retained");
      }
      if (step == Step::kClean && !files.empty()) fail("clean left files");
      if (step == Step::kShutdown && files.size() != files_before) fail("shutdown changed files");
      if (step == Step::kRestartA || step == Step::kRestartB) {
        const bool a = step == Step::kRestartA;
        const Recorder* rec = d.recorder();
        if (after != DeviceState::kMeasuring || rec == nullptr) {
          fail("restart did not start measuring");
          continue;
        }
        bool ok = rec->session().person_id == (a ? 1 : 2);
        bool has_gyro = false;
        for (const MeasurementFile& f : rec->files()) {
          if (member_index(f.group, SensorKind::kAccel)) ok &= f.group.interval_ms == (a ? 25 : 50);
          has_gyro |= member_index(f.group, SensorKind::kGyro).has_value();
        }
        ok &= has_gyro == a;
        if (!ok) fail("new session does not use the pushed config");
        if (before == DeviceState::kMeasuring && files.size() <= files_before) {
          fail("hot swap did not add a second session");
        }
      }
    }
    fs::remove_all(o.root);
  }
  c.expect(bad == 0, std::to_string(bad) + " device violations, first " + first_bad);
  c.note(std::to_string(table_sequences) + " table sequences and " + std::to_string(devices) +
         " device runs of 6 steps, 0 violations");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// 10. Determinism

Outcome criterion10() {
  Checker c;
  testkit::TempDir dir;
  testkit::write_file(dir / "config.txt", "watch_id=D8F8\nbaro_interval_ms=50\nwrite_interval_s=0.025\n");
  std::size_t trees = 0;
  for (const char* scenario : {"rest", "spin", "walk", "climb"}) {
    std::uint64_t digest[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / (std::string(scenario) + std::to_string(k));
      std::ostringstream o, e;
      const int code = cli::run({"sim", "run", "--scenario", scenario, "--seed", "42", "--duration",
                                 "30", "--config", (dir / "config.txt").string(), "--out",
                                 out.string()},
                                o, e);
      c.expect(code == 0, std::string(scenario) + " exit " + std::to_string(code) + ": " + e.str());
      digest[k] = testkit::tree_digest(out);
      c.expect(!testkit::tree_contents(out).empty(), std::string(scenario) + " tree empty");
    }
    c.expect(digest[0] == digest[1], std::string(scenario) + " trees differ");
    ++trees;
  }
  c.note(std::to_string(trees) + " scenarios x 2 runs, byte-identical trees");
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"config totality and fidelity", criterion1},
      {"geofence oracle equivalence", criterion2},
      {"density machinery", criterion3},
      {"baseline G reproduction", criterion4},
      {"spin physics oracle", criterion5},
      {"barometer and altitude", criterion6},
      {"storage claim", criterion7},
      {"logistics and privacy", criterion8},
      {"state machine model", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
