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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "daqwear/bridge.hpp"

namespace daqwear {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7410;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// `host:port`, `:port`, `port` or `tcp://host:port`.
std::optional<Endpoint> parse_endpoint(std::string_view text);

/// DAQWEAR_ENDPOINT when set and valid, otherwise the loopback default.
Endpoint default_endpoint();

/// Blocking client for the newline-delimited JSON bridge.
class BridgeClient {
 public:
  /// Throws std::runtime_error when the connection fails.
  explicit BridgeClient(const Endpoint& endpoint);
  ~BridgeClient();

  BridgeClient(const BridgeClient&) = delete;
  BridgeClient& operator=(const BridgeClient&) = delete;

  /// Sends one request and returns its response, skipping pushed events.
  Json request(const Json& request);
  /// Sends raw bytes (tests of malformed input).
  void send_raw(std::string_view bytes);
  /// Next line from the server, parsed. Nothing on connection close.
  std::optional<Json> read_message();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace daqwear
