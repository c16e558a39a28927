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

#include "daqwear/bridge.hpp"

#include <algorithm>

#include "daqwear/text.hpp"

namespace daqwear {

DeviceHost::DeviceHost(DeviceOptions options) : device_(std::move(options)) {}

DeviceHost::~DeviceHost() { stop_pacing(); }

void DeviceHost::start_pacing(double speed, std::chrono::milliseconds step) {
  stop_pacing();
  {
    std::lock_guard lock(pacing_mutex_);
    pacing_stop_ = false;
  }
  pacing_ = std::thread([this, speed, step] {
    using Clock = std::chrono::steady_clock;
    const auto wall0 = Clock::now();
    const std::int64_t device0 = with_device([](Device& d) { return d.now_us(); });
    std::unique_lock lock(pacing_mutex_);
    while (!pacing_cv_.wait_for(lock, step, [this] { return pacing_stop_; })) {
      const auto elapsed =
          std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - wall0).count();
      const auto target = device0 + static_cast<std::int64_t>(static_cast<double>(elapsed) * speed);
      with_device([target](Device& d) {
        if (d.state() != DeviceState::kShutDown && target > d.now_us()) d.advance_to(target);
      });
    }
  });
}

void DeviceHost::stop_pacing() {
  {
    std::lock_guard lock(pacing_mutex_);
    pacing_stop_ = true;
  }
  pacing_cv_.notify_all();
  if (pacing_.joinable()) pacing_.join();
}

Json to_json(const DeviceStatus& s) {
  Json j;
  j["state"] = std::string(to_string(s.state));
  j["watch_id"] = s.watch_id;
  j["files"] = s.files;
  j["clock_ms"] = s.clock_ms;
  j["person_id"] = s.person_id ? Json(text::zero_pad(*s.person_id, 3)) : Json(nullptr);
  j["session"] = s.session ? Json(*s.session) : Json(nullptr);
  j["battery_pct"] = s.battery_pct ? Json(*s.battery_pct) : Json(nullptr);
  j["privacy_label"] = s.privacy_label ? Json(std::string(1, *s.privacy_label)) : Json(nullptr);
  Json progress = Json::array();
  for (const SensorProgress& p : s.progress) {
    const double density =
        p.expected == 0 ? 0.0 : static_cast<double>(p.fresh) / static_cast<double>(p.expected);
    progress.push_back({{"sensor", std::string(kind_token(p.kind))},
                        {"interval_ms", p.interval_ms},
                        {"recorded", p.fresh},
                        {"expected", p.expected},
                        {"density", density}});
  }
  j["progress"] = std::move(progress);
  return j;
}

Json to_json(const CorrectionReport& report) {
  Json out = Json::array();
  for (const Correction& c : report.entries) {
    out.push_back({{"field", c.field},
                   {"raw", c.raw_text},
                   {"corrected", c.corrected_value},
                   {"reason", std::string(to_string(c.reason))}});
  }
  return out;
}

std::optional<ControlMessage> control_message_from_json(const Json& j) {
  if (!j.is_object()) return std::nullopt;
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) return std::nullopt;
  const std::string& t = type->get_ref<const std::string&>();
  if (t == "CLEAN") return CleanMessage{};
  if (t != "RESTART") return std::nullopt;
  auto pid = j.find("person_id");
  if (pid == j.end()) return std::nullopt;
  std::optional<std::int64_t> id;
  if (pid->is_number_integer()) {
    id = pid->get<std::int64_t>();
  } else if (pid->is_string()) {
    id = text::parse_int(pid->get_ref<const std::string&>());
  }
  if (!id || *id < 0 || *id > 999) return std::nullopt;
  return RestartMessage{static_cast<int>(*id)};
}

Json to_json(const ControlMessage& message) {
  if (const auto* r = std::get_if<RestartMessage>(&message)) {
    return {{"type", "RESTART"}, {"person_id", r->person_id}};
  }
  return {{"type", "CLEAN"}};
}

namespace {

Json failure(std::string_view reason) {
  return {{"ok", false}, {"reason", std::string(reason)}};
}

Json success(Json payload) { return {{"ok", true}, {"payload", std::move(payload)}}; }

const std::string* string_field(const Json& request, std::string_view key) {
  auto it = request.find(key);
  if (it == request.end() || !it->is_string()) return nullptr;
  return &it->get_ref<const std::string&>();
}

BridgeReply dispatch(DeviceHost& host, const Json& request) {
  const std::string* op = string_field(request, "op");
  if (!op) return {failure("missing_op")};

  if (*op == "STATUS") {
    return {success(to_json(host.with_device([](Device& d) { return d.status(); })))};
  }
  if (*op == "PUSH_CONFIG") {
    const std::string* text = string_field(request, "text");
    if (!text) return {failure("bad_argument")};
    auto report = host.with_device([&](Device& d) { return d.push_config(*text); });
    return {success({{"corrections", to_json(report)},
                     {"config", serialize_config(parse_config(*text).config)}})};
  }
  if (*op == "LIST_FILES") {
    auto files = host.with_device([](Device& d) { return d.list_files(); });
    Json list = Json::array();
    for (const DeviceFile& f : files) {
      list.push_back({{"name", f.name}, {"size", f.size}, {"open", f.open}});
    }
    return {success({{"files", std::move(list)}})};
  }
  if (*op == "PULL_FILE") {
    const std::string* name = string_field(request, "name");
    if (!name) return {failure("bad_argument")};
    auto content = host.with_device([&](Device& d) { return d.read_file(*name); });
    if (!content) return {failure("not_found")};
    return {success({{"name", *name}, {"size", content->size()}, {"content", *content}})};
  }
  if (*op == "SEND") {
    auto message_it = request.find("message");
    if (message_it == request.end()) return {failure("bad_argument")};
    auto message = control_message_from_json(*message_it);
    if (!message) return {failure("invalid_message")};
    auto status = host.with_device([&](Device& d) {
      d.send(*message);
      return d.status();
    });
    return {success(to_json(status))};
  }
  if (*op == "STREAM_STATUS") {
    auto period = kDefaultStreamPeriod;
    if (auto it = request.find("period_ms"); it != request.end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 10) {
        return {failure("bad_argument")};
      }
      period = std::chrono::milliseconds(it->get<std::int64_t>());
    }
    BridgeReply reply{success(to_json(host.with_device([](Device& d) { return d.status(); })))};
    reply.stream_period = period;
    return reply;
  }
  return {failure("unknown_op")};
}

// Nesting limit for request JSON.
constexpr int kMaxDepth = 64;

bool too_deep(std::string_view line) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char c : line) {
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (++depth > kMaxDepth) return true;
    } else if (c == ']' || c == '}') {
      --depth;
    }
  }
  return false;
}

}  // namespace

BridgeReply handle_request(DeviceHost& host, const Json& request) {
  BridgeReply reply;
  if (!request.is_object()) {
    reply.response = failure("malformed_request");
  } else {
    try {
      reply = dispatch(host, request);
    } catch (const std::exception& e) {
      reply = {failure(std::string("internal_error: ") + e.what())};
    }
    if (auto id = request.find("id"); id != request.end()) reply.response["id"] = *id;
  }
  return reply;
}

BridgeReply handle_line(DeviceHost& host, std::string_view line) {
  if (too_deep(line)) return {failure("too_deep")};
  Json request = Json::parse(line.begin(), line.end(), nullptr, false);
  if (request.is_discarded()) return {failure("malformed_json")};
  return handle_request(host, request);
}

Json status_event(DeviceHost& host) {
  return {{"event", "status"},
          {"payload", to_json(host.with_device([](Device& d) { return d.status(); }))}};
}

std::string dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace daqwear
