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
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "daqwear/config.hpp"
#include "daqwear/geofence.hpp"
#include "daqwear/log.hpp"
#include "daqwear/recorder.hpp"
#include "daqwear/sensorsim.hpp"

namespace daqwear {

inline constexpr std::string_view kPackageVersion = "1.0.0";

enum class DeviceState { kBootedIdle, kMeasuring, kDegraded, kShutDown };

std::string_view to_string(DeviceState state);

struct RestartMessage {
  int person_id = 0;
  friend bool operator==(const RestartMessage&, const RestartMessage&) = default;
};
struct CleanMessage {
  friend bool operator==(const CleanMessage&, const CleanMessage&) = default;
};

using ControlMessage = std::variant<RestartMessage, CleanMessage>;

bool valid(const ControlMessage& message);

enum class Action {
  kCloseSession,
  kReloadConfig,
  kOpenSession,
  kWriteMetafile,
  kDeleteAllFiles,
};

struct Transition {
  DeviceState next = DeviceState::kBootedIdle;
  std::vector<Action> actions;
};

/// The service state machine. Invalid messages and anything received after
/// shutdown leave the state unchanged with no actions.
Transition handle(DeviceState state, const ControlMessage& message);

struct DeviceOptions {
  /// Device file system root; holds upload/ and data/.
  std::filesystem::path root;
  std::string package_version{kPackageVersion};
  /// Wall-clock time at virtual clock zero.
  WallTime boot_time{};
  Scenario scenario = Scenario::preset(ScenarioKind::kRest);
  LogMode log_mode = kBuildLogMode;
  /// Storage available for measurement files.
  std::uint64_t storage_capacity_bytes = 500'000'000;
};

struct DeviceFile {
  std::string name;
  std::uint64_t size = 0;
  /// True while the file belongs to the running session.
  bool open = false;
};

struct SensorProgress {
  SensorKind kind = SensorKind::kAccel;
  std::int64_t interval_ms = 0;
  std::uint64_t fresh = 0;
  std::uint64_t expected = 0;
};

struct DeviceStatus {
  DeviceState state = DeviceState::kBootedIdle;
  std::string watch_id;
  std::size_t files = 0;
  std::int64_t clock_ms = 0;
  std::optional<int> person_id;
  std::optional<std::string> session;
  std::optional<double> battery_pct;
  std::optional<char> privacy_label;
  std::vector<SensorProgress> progress;
};

/// The virtual watch: the measurement service driven by a virtual clock.
/// Single owner. Messages may be posted from any thread and are handled in
/// arrival order at the next advance() or drain().
class Device {
 public:
  explicit Device(DeviceOptions options);
  ~Device();

  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  DeviceState state() const { return state_; }
  std::int64_t now_us() const { return clock_us_; }
  std::int64_t now_ms() const { return clock_us_ / 1000; }

  /// Queue a message; safe from any thread.
  void post(ControlMessage message);
  /// Handle every queued message at the current clock.
  void drain();
  /// post() then drain().
  void send(ControlMessage message);

  /// Runs sensor readouts and writer ticks with times < t_us, then sets the
  /// clock to t_us.
  void advance_to(std::int64_t t_us);
  void advance_by_ms(std::int64_t ms) { advance_to(clock_us_ + ms * 1000); }

  /// Stops sensors, flushes and closes files. Terminal.
  void shutdown();

  /// Writes the upload config and returns what parsing it corrected.
  CorrectionReport push_config(std::string_view text);
  std::filesystem::path upload_config_path() const;
  std::filesystem::path data_root() const;

  DeviceStatus status() const;
  std::vector<DeviceFile> list_files() const;
  /// Content of a measurement file or metafile by bare name.
  std::optional<std::string> read_file(std::string_view name);

  const Recorder* recorder() const { return recorder_.get(); }
  /// Applies to the current and every later session.
  void set_row_observer(Recorder::RowObserver observer);
  const Logger& logger() const { return logger_; }
  StorageBudget& storage() { return *budget_; }

 private:
  void apply(const ControlMessage& message);
  void open_session(int person_id);
  void close_session();
  void delete_all_files();
  Config load_config() const;
  void on_readout(SensorKind kind, const Readout& readout);
  void on_writer_tick();

  DeviceOptions options_;
  Logger logger_;
  DeviceState state_ = DeviceState::kBootedIdle;
  std::int64_t clock_us_ = 0;

  std::mutex inbox_mutex_;
  std::deque<ControlMessage> inbox_;

  std::shared_ptr<StorageBudget> budget_;
  std::unique_ptr<Recorder> recorder_;
  Recorder::RowObserver row_observer_;
  std::vector<SensorStream> streams_;
  std::int64_t next_tick_us_ = 0;
  std::int64_t write_interval_us_ = 0;
  std::int64_t session_t0_us_ = 0;
  std::uint64_t session_count_ = 0;
  std::optional<WallTime> last_session_start_;
  std::optional<int> person_id_;
  std::optional<GpsFix> latest_fix_;
  std::optional<double> battery_pct_;
  PrivacyLabel last_label_ = PrivacyLabel::kUnknown;
};

struct TimedMessage {
  std::int64_t at_ms = 0;
  ControlMessage message;
};

/// A scripted run on the virtual clock.
struct RunPlan {
  std::vector<TimedMessage> messages;
  std::int64_t duration_ms = 0;
  bool shutdown_at_end = true;
};

/// Delivers each message at its virtual time (in order), runs until
/// duration_ms and optionally shuts the device down.
void run(Device& device, const RunPlan& plan);

}  // namespace daqwear
