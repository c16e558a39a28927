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

#include <cstdint>
#include <optional>

namespace daqwear {

/// Public area. A radius of 0 switches geofencing off.
struct PrivacyCircle {
  double center_lat_deg = 0.0;
  double center_lon_deg = 0.0;
  std::int32_t radius_m = 0;
};

struct GpsFix {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  /// Central-clock time at which the fix was received.
  std::int64_t time_ms = 0;
  /// False when the receiver had no satellite lock.
  bool valid = true;
};

/// I = inside the public area, P = outside (private), U = unknown.
enum class PrivacyLabel : char { kInside = 'I', kPrivate = 'P', kUnknown = '?' };

constexpr char to_char(PrivacyLabel label) { return static_cast<char>(label); }
std::optional<PrivacyLabel> label_from_char(char c);

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Great-circle (haversine) distance in meters on a sphere of kEarthRadiusM.
double distance_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

inline double distance_m(const GpsFix& fix, double lat_deg, double lon_deg) {
  return distance_m(fix.lat_deg, fix.lon_deg, lat_deg, lon_deg);
}

/// Boundary counts as inside.
PrivacyLabel label(const std::optional<GpsFix>& fix, const PrivacyCircle& circle);

/// A fix older than this many GPS intervals is treated as absent.
inline constexpr std::int64_t kFixStalenessIntervals = 3;

/// Drops `fix` if it is older than kFixStalenessIntervals GPS intervals at
/// `now_ms`. A GPS interval of 0 (GPS off) means there is never a usable fix.
std::optional<GpsFix> fresh_fix(const std::optional<GpsFix>& fix, std::int64_t now_ms,
                                std::int64_t gps_interval_ms);

}  // namespace daqwear
