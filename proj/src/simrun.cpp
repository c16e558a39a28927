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

#include "daqwear/simrun.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <unistd.h>

namespace daqwear {

namespace fs = std::filesystem;

namespace {

fs::path make_temp_root() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const fs::path base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = base / ("daqwear-sim-" + std::to_string(::getpid()) + "-" +
                                 std::to_string(counter++) + "-" + std::to_string(rd() % 100000));
    if (fs::create_directory(candidate)) return candidate;
  }
  throw std::runtime_error("cannot create a temporary device directory");
}

}  // namespace

WallTime default_sim_start() {
  using namespace std::chrono;
  return sys_days{year{2022} / June / 1} + hours{9} + minutes{30};
}

SimRunResult sim_run(const SimRunOptions& options) {
  const bool temporary = options.device_root.empty();
  const fs::path root = temporary ? make_temp_root() : options.device_root;

  SimRunResult result;
  {
    DeviceOptions device_options;
    device_options.root = root;
    device_options.boot_time = options.start;
    device_options.scenario = options.scenario;
    device_options.log_mode = options.log_mode;
    DeviceHost host(std::move(device_options));

    host.with_device([&](Device& device) {
      if (options.row_observer) device.set_row_observer(options.row_observer);
      if (options.config_text) result.corrections = device.push_config(*options.config_text);
      RunPlan plan;
      plan.messages.push_back({0, RestartMessage{options.person_id}});
      plan.duration_ms = options.duration_ms;
      plan.shutdown_at_end = false;
      run(device, plan);
      if (device.recorder()) result.files = device.recorder()->files();
      device.shutdown();
      result.final_status = device.status();
    });

    if (!options.out_dir.empty()) {
      result.pull = pull_all(in_process(host), options.out_dir, options.scrub);
    }
  }
  if (temporary) {
    std::error_code ignored;
    fs::remove_all(root, ignored);
  }
  return result;
}

}  // namespace daqwear
