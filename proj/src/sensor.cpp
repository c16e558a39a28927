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

#include "daqwear/sensor.hpp"

namespace daqwear {

std::string_view kind_token(SensorKind kind) {
  switch (kind) {
    case SensorKind::kAccel: return "accel";
    case SensorKind::kLinearAccel: return "linearaccel";
    case SensorKind::kGyro: return "gyro";
    case SensorKind::kBaro: return "baro";
    case SensorKind::kGps: return "gps";
    case SensorKind::kBattery: return "battery";
  }
  return "unknown";
}

std::optional<SensorKind> kind_from_token(std::string_view token) {
  for (SensorKind kind : kAllSensorKinds) {
    if (kind_token(kind) == token) return kind;
  }
  return std::nullopt;
}

}  // namespace daqwear
