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

#include "daqwear/geofence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace daqwear {

namespace {

constexpr double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

std::optional<PrivacyLabel> label_from_char(char c) {
  switch (c) {
    case 'I': return PrivacyLabel::kInside;
    case 'P': return PrivacyLabel::kPrivate;
    case '?': return PrivacyLabel::kUnknown;
    default: return std::nullopt;
  }
}

double distance_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  const double phi1 = radians(lat1_deg);
  const double phi2 = radians(lat2_deg);
  const double dphi = radians(lat2_deg - lat1_deg);
  const double dlambda = radians(lon2_deg - lon1_deg);
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

PrivacyLabel label(const std::optional<GpsFix>& fix, const PrivacyCircle& circle) {
  if (!fix || !fix->valid) return PrivacyLabel::kUnknown;
  if (circle.radius_m == 0) return PrivacyLabel::kInside;
  const double d = distance_m(*fix, circle.center_lat_deg, circle.center_lon_deg);
  return d <= static_cast<double>(circle.radius_m) ? PrivacyLabel::kInside
                                                   : PrivacyLabel::kPrivate;
}

std::optional<GpsFix> fresh_fix(const std::optional<GpsFix>& fix, std::int64_t now_ms,
                                std::int64_t gps_interval_ms) {
  if (!fix || gps_interval_ms <= 0) return std::nullopt;
  if (now_ms - fix->time_ms > kFixStalenessIntervals * gps_interval_ms) return std::nullopt;
  return fix;
}

}  // namespace daqwear
