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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "daqwear/service.hpp"

namespace daqwear {

using Json = nlohmann::json;

/// A device shared between bridge connections. Every access goes through
/// with_device(), which serializes callers.
class DeviceHost {
 public:
  explicit DeviceHost(DeviceOptions options);
  ~DeviceHost();

  DeviceHost(const DeviceHost&) = delete;
  DeviceHost& operator=(const DeviceHost&) = delete;

  template <typename F>
  decltype(auto) with_device(F&& f) {
    std::lock_guard lock(mutex_);
    return std::forward<F>(f)(device_);
  }

  /// Advances the virtual clock with wall time (scaled by `speed`) on a
  /// background thread until stop_pacing().
  void start_pacing(double speed = 1.0,
                    std::chrono::milliseconds step = std::chrono::milliseconds(10));
  void stop_pacing();

 private:
  std::mutex mutex_;
  Device device_;

  std::mutex pacing_mutex_;
  std::condition_variable pacing_cv_;
  bool pacing_stop_ = false;
  std::thread pacing_;
};

Json to_json(const DeviceStatus& status);
Json to_json(const CorrectionReport& report);

/// ControlMessage from `{"type": "RESTART", "person_id": 7}` or
/// `{"type": "CLEAN"}`. Nothing when the shape is wrong.
std::optional<ControlMessage> control_message_from_json(const Json& j);
Json to_json(const ControlMessage& message);

struct BridgeReply {
  Json response;
  /// Set when the client asked for status pushes (STREAM_STATUS).
  std::optional<std::chrono::milliseconds> stream_period{};
};

inline constexpr std::chrono::milliseconds kDefaultStreamPeriod{500};

/// Handles one decoded request. Always produces exactly one response object
/// with `ok` and either `payload` or `reason`; the request `id` is echoed.
BridgeReply handle_request(DeviceHost& host, const Json& request);

/// Handles one request line (JSON text). Malformed input yields ok=false.
BridgeReply handle_line(DeviceHost& host, std::string_view line);

/// Unsolicited status event sent to streaming clients.
Json status_event(DeviceHost& host);

/// Compact JSON text; invalid UTF-8 is replaced, never thrown on.
std::string dump(const Json& j);

}  // namespace daqwear
