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
#include <memory>
#include <optional>
#include <string>

#include "daqwear/bridge.hpp"

namespace daqwear {

inline constexpr std::uint16_t kDefaultBridgePort = 7410;
inline constexpr std::uint16_t kDefaultWebSocketPort = 7411;

struct ServeOptions {
  /// Loopback unless LAN access is explicitly requested.
  std::string bind_address = "127.0.0.1";
  /// 0 picks a free port.
  std::uint16_t tcp_port = kDefaultBridgePort;
  std::uint16_t ws_port = kDefaultWebSocketPort;
  bool enable_ws = true;
  /// Static files served over HTTP on the WebSocket port.
  std::optional<std::filesystem::path> ui_dir;
  /// Largest accepted request line.
  std::size_t max_line_bytes = 16 * 1024 * 1024;
  int threads = 2;
};

/// Bridge server: newline-delimited JSON over TCP, and the same requests as
/// WebSocket text messages on a second port that also serves the UI.
/// Binds in the constructor and serves until stop() or destruction.
class BridgeServer {
 public:
  BridgeServer(DeviceHost& host, ServeOptions options);
  ~BridgeServer();

  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  std::uint16_t tcp_port() const;
  /// 0 when the WebSocket listener is disabled.
  std::uint16_t ws_port() const;

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace daqwear
