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

#include "daqwear/bridge_client.hpp"

#include <boost/asio.hpp>

#include <cstdlib>
#include <stdexcept>

#include "daqwear/text.hpp"

namespace daqwear {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

std::optional<Endpoint> parse_endpoint(std::string_view s) {
  s = text::trim(s);
  if (text::starts_with(s, "tcp://")) s.remove_prefix(6);
  Endpoint ep;
  std::string_view port_text = s;
  if (const auto colon = s.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) ep.host = std::string(s.substr(0, colon));
    port_text = s.substr(colon + 1);
  }
  auto port = text::parse_int(port_text);
  if (!port || *port <= 0 || *port > 65535) return std::nullopt;
  ep.port = static_cast<std::uint16_t>(*port);
  return ep;
}

Endpoint default_endpoint() {
  if (const char* env = std::getenv("DAQWEAR_ENDPOINT")) {
    if (auto ep = parse_endpoint(env)) return *ep;
  }
  return Endpoint{};
}

struct BridgeClient::Impl {
  asio::io_context ioc;
  tcp::socket socket{ioc};
  asio::streambuf buffer;
};

BridgeClient::BridgeClient(const Endpoint& endpoint) : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  tcp::resolver resolver(impl_->ioc);
  auto results = resolver.resolve(endpoint.host, std::to_string(endpoint.port), ec);
  if (!ec) asio::connect(impl_->socket, results, ec);
  if (ec) {
    throw std::runtime_error("cannot connect to " + endpoint.host + ":" +
                             std::to_string(endpoint.port) + ": " + ec.message());
  }
}

BridgeClient::~BridgeClient() {
  boost::system::error_code ignored;
  impl_->socket.shutdown(tcp::socket::shutdown_both, ignored);
  impl_->socket.close(ignored);
}

void BridgeClient::send_raw(std::string_view bytes) {
  asio::write(impl_->socket, asio::buffer(bytes.data(), bytes.size()));
}

std::optional<Json> BridgeClient::read_message() {
  boost::system::error_code ec;
  const std::size_t n = asio::read_until(impl_->socket, impl_->buffer, '\n', ec);
  if (ec) return std::nullopt;
  const auto begin = asio::buffers_begin(impl_->buffer.data());
  std::string line(begin, begin + static_cast<std::ptrdiff_t>(n - 1));
  impl_->buffer.consume(n);
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("unparsable reply from bridge");
  return j;
}

Json BridgeClient::request(const Json& request) {
  send_raw(dump(request) + "\n");
  while (true) {
    auto message = read_message();
    if (!message) throw std::runtime_error("bridge closed the connection");
    if (!message->contains("event")) return *message;
  }
}

}  // namespace daqwear
