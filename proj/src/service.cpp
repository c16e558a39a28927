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

#include "daqwear/service.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

namespace daqwear {

namespace fs = std::filesystem;

std::string_view to_string(DeviceState state) {
  switch (state) {
    case DeviceState::kBootedIdle: return "BootedIdle";
    case DeviceState::kMeasuring: return "Measuring";
    case DeviceState::kDegraded: return "Degraded";
    case DeviceState::kShutDown: return "ShutDown";
  }
  return "Unknown";
}

bool valid(const ControlMessage& message) {
  if (const auto* restart = std::get_if<RestartMessage>(&message)) {
    return restart->person_id >= 0 && restart->person_id <= 999;
  }
  return true;
}

Transition handle(DeviceState state, const ControlMessage& message) {
  if (state == DeviceState::kShutDown || !valid(message)) return {state, {}};
  const bool recording = state == DeviceState::kMeasuring || state == DeviceState::kDegraded;
  if (std::holds_alternative<RestartMessage>(message)) {
    Transition t{DeviceState::kMeasuring, {}};
    if (recording) t.actions.push_back(Action::kCloseSession);
    t.actions.insert(t.actions.end(),
                     {Action::kReloadConfig, Action::kOpenSession, Action::kWriteMetafile});
    return t;
  }
  Transition t{DeviceState::kBootedIdle, {}};
  if (recording) t.actions.push_back(Action::kCloseSession);
  t.actions.push_back(Action::kDeleteAllFiles);
  return t;
}

namespace {

std::uint64_t tree_size(const fs::path& root) {
  std::uint64_t total = 0;
  std::error_code ec;
  if (!fs::exists(root, ec)) return 0;
  for (const auto& entry : fs::recursive_directory_iterator(root, ec)) {
    if (entry.is_regular_file(ec)) total += entry.file_size(ec);
  }
  return total;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

Device::Device(DeviceOptions options)
    : options_(std::move(options)),
      logger_(options_.log_mode),
      budget_(std::make_shared<StorageBudget>()) {
  fs::create_directories(options_.root / "upload");
  fs::create_directories(data_root());
  budget_->capacity = options_.storage_capacity_bytes;
  budget_->used = tree_size(data_root());
  logger_.flow("service booted, waiting for RESTART or CLEAN");
}

Device::~Device() {
  if (state_ != DeviceState::kShutDown) close_session();
}

fs::path Device::upload_config_path() const { return options_.root / "upload" / "config.txt"; }
fs::path Device::data_root() const { return options_.root / "data"; }

void Device::post(ControlMessage message) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back(std::move(message));
}

void Device::drain() {
  while (true) {
    ControlMessage message;
    {
      std::lock_guard lock(inbox_mutex_);
      if (inbox_.empty()) return;
      message = std::move(inbox_.front());
      inbox_.pop_front();
    }
    apply(message);
  }
}

void Device::send(ControlMessage message) {
  post(std::move(message));
  drain();
}

void Device::apply(const ControlMessage& message) {
  if (!valid(message)) {
    logger_.warning("ignoring invalid control message");
    return;
  }
  const Transition t = handle(state_, message);
  if (t.actions.empty()) return;

  std::optional<int> person;
  if (const auto* restart = std::get_if<RestartMessage>(&message)) person = restart->person_id;

  state_ = t.next;
  for (Action action : t.actions) {
    switch (action) {
      case Action::kCloseSession:
        close_session();
        break;
      case Action::kReloadConfig:
        // The config is read as part of opening the session.
        break;
      case Action::kOpenSession:
        open_session(*person);
        break;
      case Action::kWriteMetafile:
        // Written by the recorder together with the session files.
        break;
      case Action::kDeleteAllFiles:
        delete_all_files();
        break;
    }
  }
}

Config Device::load_config() const {
  std::string text;
  std::error_code ec;
  if (fs::exists(upload_config_path(), ec)) text = read_all(upload_config_path());
  ParsedConfig parsed = parse_config(text);
  for (const Correction& c : parsed.report.entries) {
    logger_.warning("config: " + c.field + " " + std::string(to_string(c.reason)) +
                    ", using '" + c.corrected_value + "'");
  }
  return parsed.config;
}

void Device::open_session(int person_id) {
  const Config config = load_config();

  WallTime start = options_.boot_time + std::chrono::seconds(clock_us_ / 1'000'000);
  // File names carry second resolution; keep them unique and ordered.
  if (last_session_start_ && start <= *last_session_start_) {
    start = *last_session_start_ + std::chrono::seconds(1);
  }
  last_session_start_ = start;

  SessionInfo session{options_.package_version, person_id, start};
  try {
    recorder_ = std::make_unique<Recorder>(data_root() / config.watch_id, config, session,
                                           clock_us_ / 1000, budget_);
  } catch (const std::exception& e) {
    logger_.error(std::string("cannot open session: ") + e.what());
    recorder_.reset();
    state_ = DeviceState::kDegraded;
    return;
  }
  if (row_observer_) recorder_->set_row_observer(row_observer_);

  ++session_count_;
  person_id_ = person_id;
  session_t0_us_ = clock_us_;
  write_interval_us_ = config.write_interval_ms() * 1000;
  next_tick_us_ = clock_us_;
  latest_fix_.reset();
  battery_pct_.reset();
  last_label_ = PrivacyLabel::kUnknown;

  streams_.clear();
  for (SensorKind kind : kAllSensorKinds) {
    const auto interval = config.interval_ms(kind);
    if (interval == 0) continue;
    streams_.emplace_back(options_.scenario, kind, interval, clock_us_, session_count_);
  }
  logger_.flow("session opened for person " + std::to_string(person_id));
}

void Device::close_session() {
  if (!recorder_) return;
  recorder_->close(clock_us_ / 1000);
  recorder_.reset();
  streams_.clear();
  logger_.flow("session closed");
}

void Device::delete_all_files() {
  std::error_code ec;
  fs::remove_all(data_root(), ec);
  fs::create_directories(data_root(), ec);
  budget_->used = 0;
  logger_.flow("all measurement files removed");
}

void Device::set_row_observer(Recorder::RowObserver observer) {
  row_observer_ = std::move(observer);
  if (recorder_) recorder_->set_row_observer(row_observer_);
}

void Device::on_readout(SensorKind kind, const Readout& readout) {
  if (!readout.sample) return;
  const Sample& sample = *readout.sample;
  recorder_->mailbox().post(sample);
  if (kind == SensorKind::kGps) {
    latest_fix_ = GpsFix{sample.values[0], sample.values[1], clock_us_ / 1000, true};
  } else if (kind == SensorKind::kBattery) {
    battery_pct_ = sample.values[0];
  }
}

void Device::on_writer_tick() {
  const Config& config = recorder_->config();
  const std::int64_t now_ms = clock_us_ / 1000;
  const auto fix = fresh_fix(latest_fix_, now_ms, config.interval_ms(SensorKind::kGps));
  const PrivacyCircle circle{config.privacy_lat_deg, config.privacy_lon_deg,
                             config.privacy_radius_m};
  last_label_ = label(fix, circle);
  const TickResult result = recorder_->writer_tick(now_ms, last_label_);
  if (result.write_failed) {
    if (state_ != DeviceState::kDegraded) logger_.error("write failed, retrying on next tick");
    state_ = DeviceState::kDegraded;
  } else if (state_ == DeviceState::kDegraded) {
    logger_.flow("writes recovered");
    state_ = DeviceState::kMeasuring;
  }
}

void Device::advance_to(std::int64_t t_us) {
  drain();
  if (state_ == DeviceState::kShutDown || t_us <= clock_us_) return;
  while (recorder_) {
    SensorStream* next = nullptr;
    for (SensorStream& s : streams_) {
      if (!next || s.next_arrival_us() < next->next_arrival_us()) next = &s;
    }
    const bool sensor_first = next && next->next_arrival_us() <= next_tick_us_;
    const std::int64_t event_us = sensor_first ? next->next_arrival_us() : next_tick_us_;
    if (event_us >= t_us) break;
    clock_us_ = event_us;
    if (sensor_first) {
      const Readout readout = next->pop();
      on_readout(next->kind(), readout);
    } else {
      on_writer_tick();
      next_tick_us_ += write_interval_us_;
    }
  }
  clock_us_ = t_us;
}

void Device::shutdown() {
  drain();
  if (state_ == DeviceState::kShutDown) return;
  close_session();
  state_ = DeviceState::kShutDown;
  logger_.flow("shut down");
}

CorrectionReport Device::push_config(std::string_view text) {
  {
    std::ofstream out(upload_config_path(), std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  CorrectionReport report = parse_config(text).report;
  logger_.flow("config uploaded, " + std::to_string(report.entries.size()) + " corrections");
  return report;
}

DeviceStatus Device::status() const {
  DeviceStatus s;
  s.state = state_;
  s.clock_ms = clock_us_ / 1000;
  s.files = list_files().size();
  if (recorder_) {
    s.watch_id = recorder_->config().watch_id;
    s.person_id = person_id_;
    s.session = session_stamp(recorder_->session().start);
    s.battery_pct = battery_pct_;
    s.privacy_label = to_char(last_label_);
    const std::int64_t elapsed_ms = (clock_us_ - session_t0_us_) / 1000;
    for (const MeasurementFile& f : recorder_->files()) {
      for (std::size_t m = 0; m < f.group.members.size(); ++m) {
        s.progress.push_back({f.group.members[m], f.group.interval_ms, f.fresh_cells[m],
                              static_cast<std::uint64_t>(elapsed_ms / f.group.interval_ms)});
      }
    }
  } else {
    std::error_code ec;
    const std::string text =
        fs::exists(upload_config_path(), ec) ? read_all(upload_config_path()) : std::string();
    s.watch_id = parse_config(text).config.watch_id;
  }
  return s;
}

std::vector<DeviceFile> Device::list_files() const {
  std::vector<DeviceFile> out;
  std::error_code ec;
  if (!fs::exists(data_root(), ec)) return out;
  std::vector<fs::path> open_paths;
  if (recorder_) {
    open_paths.push_back(recorder_->metafile_path());
    for (const MeasurementFile& f : recorder_->files()) open_paths.push_back(f.path);
  }
  for (const auto& entry : fs::recursive_directory_iterator(data_root(), ec)) {
    if (!entry.is_regular_file(ec)) continue;
    const bool open =
        std::find(open_paths.begin(), open_paths.end(), entry.path()) != open_paths.end();
    std::uint64_t size = entry.file_size(ec);
    if (open && recorder_) {
      for (const MeasurementFile& f : recorder_->files()) {
        if (f.path == entry.path()) size = f.bytes_written;
      }
    }
    out.push_back({entry.path().filename().string(), size, open});
  }
  std::sort(out.begin(), out.end(),
            [](const DeviceFile& a, const DeviceFile& b) { return a.name < b.name; });
  return out;
}

std::optional<std::string> Device::read_file(std::string_view name) {
  if (name.empty() || name.find('/') != std::string_view::npos ||
      name.find('\\') != std::string_view::npos || name == "." || name == "..") {
    return std::nullopt;
  }
  if (recorder_) recorder_->flush();
  std::error_code ec;
  if (!fs::exists(data_root(), ec)) return std::nullopt;
  for (const auto& watch_dir : fs::directory_iterator(data_root(), ec)) {
    const fs::path candidate = watch_dir.path() / std::string(name);
    if (fs::is_regular_file(candidate, ec)) return read_all(candidate);
  }
  return std::nullopt;
}

void run(Device& device, const RunPlan& plan) {
  std::vector<TimedMessage> messages = plan.messages;
  std::stable_sort(messages.begin(), messages.end(),
                   [](const TimedMessage& a, const TimedMessage& b) { return a.at_ms < b.at_ms; });
  const std::int64_t base_us = device.now_us();
  for (const TimedMessage& m : messages) {
    if (m.at_ms >= plan.duration_ms) break;
    device.advance_to(base_us + m.at_ms * 1000);
    device.send(m.message);
  }
  device.advance_to(base_us + plan.duration_ms * 1000);
  if (plan.shutdown_at_end) device.shutdown();
}

}  // namespace daqwear
