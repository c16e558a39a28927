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
#include <filesystem>
#include <optional>
#include <string>

#include "daqwear/logistics.hpp"
#include "daqwear/service.hpp"

namespace daqwear {

/// 2022-06-01 09:30:00 UTC, the default wall time of a simulated boot.
WallTime default_sim_start();

struct SimRunOptions {
  Scenario scenario = Scenario::preset(ScenarioKind::kRest);
  std::int64_t duration_ms = 60'000;
  /// Config pushed before the session starts; defaults when absent.
  std::optional<std::string> config_text;
  int person_id = 1;
  WallTime start = default_sim_start();
  /// Device file system; a temporary directory (removed afterwards) when empty.
  std::filesystem::path device_root;
  /// Destination of the pulled tree; nothing is pulled when empty.
  std::filesystem::path out_dir;
  bool scrub = false;
  LogMode log_mode = kBuildLogMode;
  /// Called for every written row.
  Recorder::RowObserver row_observer;
};

struct SimRunResult {
  CorrectionReport corrections;
  DeviceStatus final_status;
  std::vector<MeasurementFile> files;
  PullReport pull;
};

/// Boots a virtual device, starts one session at time 0, runs it for
/// duration_ms on the virtual clock, shuts down and pulls the files.
SimRunResult sim_run(const SimRunOptions& options);

}  // namespace daqwear
