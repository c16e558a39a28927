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

#include "daqwear/bridge_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <iterator>
#include <thread>
#include <vector>

namespace daqwear {

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using boost::system::error_code;

constexpr std::size_t kMaxQueuedMessages = 1024;

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string rejection(std::string_view reason) {
  return dump(Json{{"ok", false}, {"reason", std::string(reason)}});
}

// Outgoing queue and status streaming shared by both transports. Derived
// classes provide frame(), write_front() and shut().
template <typename Derived>
class Session : public std::enable_shared_from_this<Derived> {
 protected:
  Session(DeviceHost& host, const asio::any_io_executor& executor)
      : host_(host), timer_(executor) {}

  Derived& self() { return static_cast<Derived&>(*this); }

  void handle(std::string_view line) {
    BridgeReply reply = handle_line(host_, line);
    send(dump(reply.response));
    if (reply.stream_period) {
      period_ = *reply.stream_period;
      if (!streaming_) {
        streaming_ = true;
        arm();
      }
    }
  }

  void send(std::string text) {
    if (stopped_) return;
    outbox_.push_back(self().frame(std::move(text)));
    if (outbox_.size() == 1) self().write_front();
  }

  void on_write(error_code ec) {
    if (ec) {
      stop();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) {
      self().write_front();
    } else if (closing_) {
      stop();
    }
  }

  void stop() {
    if (stopped_) return;
    stopped_ = true;
    timer_.cancel();
    self().shut();
  }

  DeviceHost& host_;
  std::deque<std::string> outbox_;
  bool closing_ = false;
  bool stopped_ = false;

 private:
  void arm() {
    timer_.expires_after(period_);
    timer_.async_wait([self = this->shared_from_this()](error_code ec) {
      if (ec || self->stopped_) return;
      if (self->outbox_.size() < kMaxQueuedMessages) self->send(dump(status_event(self->host_)));
      self->arm();
    });
  }

  asio::steady_timer timer_;
  std::chrono::milliseconds period_{kDefaultStreamPeriod};
  bool streaming_ = false;
};

class LineSession : public Session<LineSession> {
 public:
  LineSession(tcp::socket socket, DeviceHost& host, std::size_t max_line)
      : Session(host, socket.get_executor()), socket_(std::move(socket)), buffer_(max_line) {}

  void start() { read(); }

  static std::string frame(std::string text) { return text + '\n'; }

  void write_front() {
    asio::async_write(socket_, asio::buffer(outbox_.front()),
                      [self = shared_from_this()](error_code ec, std::size_t) {
                        self->on_write(ec);
                      });
  }

  void shut() {
    error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this()](error_code ec, std::size_t n) {
                             self->on_read(ec, n);
                           });
  }

  void on_read(error_code ec, std::size_t n) {
    if (ec == asio::error::not_found) {
      closing_ = true;
      send(rejection("line_too_long"));
      return;
    }
    if (ec) {
      stop();
      return;
    }
    const auto begin = asio::buffers_begin(buffer_.data());
    std::string line(begin, begin + static_cast<std::ptrdiff_t>(n - 1));
    buffer_.consume(n);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!blank(line)) handle(line);
    read();
  }

  tcp::socket socket_;
  asio::streambuf buffer_;
};

class WsSession : public Session<WsSession> {
 public:
  WsSession(tcp::socket socket, DeviceHost& host, std::size_t max_message)
      : Session(host, socket.get_executor()), ws_(std::move(socket)) {
    ws_.read_message_max(max_message);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
  }

  void run(http::request<http::string_body> request) {
    request_ = std::move(request);
    ws_.async_accept(request_, [self = shared_from_this()](error_code ec) {
      if (ec) return;
      self->read();
    });
  }

  static std::string frame(std::string text) { return text; }

  void write_front() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()),
                    [self = shared_from_this()](error_code ec, std::size_t) {
                      self->on_write(ec);
                    });
  }

  void shut() {
    error_code ignored;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
    beast::get_lowest_layer(ws_).close();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(error_code ec) {
    if (ec == websocket::error::message_too_big) {
      closing_ = true;
      send(rejection("line_too_long"));
      return;
    }
    if (ec) {
      stop();
      return;
    }
    const std::string message = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (!blank(message)) handle(message);
    read();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

std::string_view mime_type(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

// Maps a request target to a file under `root`, refusing anything that
// would leave it.
std::optional<std::filesystem::path> resolve_target(const std::filesystem::path& root,
                                                    std::string_view target) {
  target = target.substr(0, target.find_first_of("?#"));
  if (target.empty() || target.front() != '/') return std::nullopt;
  std::filesystem::path rel;
  std::size_t pos = 1;
  while (pos <= target.size()) {
    const std::size_t next = std::min(target.find('/', pos), target.size());
    const std::string_view part = target.substr(pos, next - pos);
    if (part == ".." || part.find('\\') != std::string_view::npos ||
        part.find('\0') != std::string_view::npos) {
      return std::nullopt;
    }
    if (!part.empty() && part != ".") rel /= std::string(part);
    pos = next + 1;
  }
  std::filesystem::path full = root / rel;
  if (rel.empty() || std::filesystem::is_directory(full)) full /= "index.html";
  return full;
}

http::response<http::string_body> static_response(
    const http::request<http::string_body>& req,
    const std::optional<std::filesystem::path>& ui_dir) {
  auto respond = [&](http::status status, std::string body, std::string_view type) {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::server, "daqwear-bridge");
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(req.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return respond(http::status::method_not_allowed, "method not allowed\n", "text/plain");
  }
  if (!ui_dir) return respond(http::status::not_found, "no UI configured\n", "text/plain");
  const auto target = req.target();
  auto path = resolve_target(*ui_dir, std::string_view(target.data(), target.size()));
  if (!path) return respond(http::status::bad_request, "bad path\n", "text/plain");
  std::ifstream in(*path, std::ios::binary);
  if (!in) return respond(http::status::not_found, "not found\n", "text/plain");
  std::string body(std::istreambuf_iterator<char>(in), {});
  auto res = respond(http::status::ok, std::move(body), mime_type(*path));
  if (req.method() == http::verb::head) {
    const auto size = res.body().size();
    res.body().clear();
    res.content_length(size);
  }
  return res;
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, DeviceHost& host, const ServeOptions& options)
      : stream_(std::move(socket)), host_(host), options_(options) {}

  void start() { read(); }

 private:
  void read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     [self = shared_from_this()](error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(error_code ec) {
    if (ec) {
      close();
      return;
    }
    if (websocket::is_upgrade(request_)) {
      stream_.expires_never();
      auto ws = std::make_shared<WsSession>(stream_.release_socket(), host_,
                                            options_.max_line_bytes);
      ws->run(std::move(request_));
      return;
    }
    response_ = static_response(request_, options_.ui_dir);
    http::async_write(stream_, response_, [self = shared_from_this()](error_code ec, std::size_t) {
      if (ec || !self->response_.keep_alive()) {
        self->close();
        return;
      }
      self->read();
    });
  }

  void close() {
    error_code ignored;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  http::response<http::string_body> response_;
  DeviceHost& host_;
  const ServeOptions& options_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  using Handler = std::function<void(tcp::socket)>;

  Listener(asio::io_context& ioc, const tcp::endpoint& endpoint, Handler handler)
      : ioc_(ioc), acceptor_(ioc), handler_(std::move(handler)) {
    acceptor_.open(endpoint.protocol());
    acceptor_.set_option(asio::socket_base::reuse_address(true));
    acceptor_.bind(endpoint);
    acceptor_.listen(asio::socket_base::max_listen_connections);
  }

  std::uint16_t port() const { return acceptor_.local_endpoint().port(); }

  void accept() {
    acceptor_.async_accept(asio::make_strand(ioc_),
                           [self = shared_from_this()](error_code ec, tcp::socket socket) {
                             if (ec == asio::error::operation_aborted) return;
                             if (!ec) self->handler_(std::move(socket));
                             self->accept();
                           });
  }

  void close() {
    error_code ignored;
    acceptor_.close(ignored);
  }

 private:
  asio::io_context& ioc_;
  tcp::acceptor acceptor_;
  Handler handler_;
};

}  // namespace

struct BridgeServer::Impl {
  /// Reset by stop(), which destroys every session and closes its socket.
  std::optional<asio::io_context> ioc;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  std::shared_ptr<Listener> tcp;
  std::shared_ptr<Listener> ws;
  std::uint16_t tcp_port = 0;
  std::uint16_t ws_port = 0;
  std::vector<std::thread> threads;
  ServeOptions options;
};

BridgeServer::BridgeServer(DeviceHost& host, ServeOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->ioc.emplace();
  const ServeOptions& opts = impl_->options;
  const auto address = asio::ip::make_address(opts.bind_address);

  impl_->tcp = std::make_shared<Listener>(
      *impl_->ioc, tcp::endpoint(address, opts.tcp_port), [&host, &opts](tcp::socket socket) {
        std::make_shared<LineSession>(std::move(socket), host, opts.max_line_bytes)->start();
      });
  impl_->tcp->accept();
  impl_->tcp_port = impl_->tcp->port();
  if (opts.enable_ws) {
    impl_->ws = std::make_shared<Listener>(
        *impl_->ioc, tcp::endpoint(address, opts.ws_port), [&host, &opts](tcp::socket socket) {
          std::make_shared<HttpSession>(std::move(socket), host, opts)->start();
        });
    impl_->ws->accept();
    impl_->ws_port = impl_->ws->port();
  }

  impl_->work.emplace(impl_->ioc->get_executor());
  for (int i = 0; i < std::max(1, opts.threads); ++i) {
    impl_->threads.emplace_back([this] { impl_->ioc->run(); });
  }
}

BridgeServer::~BridgeServer() { stop(); }

std::uint16_t BridgeServer::tcp_port() const { return impl_->tcp_port; }

std::uint16_t BridgeServer::ws_port() const { return impl_->ws_port; }

void BridgeServer::stop() {
  if (!impl_->ioc) return;
  impl_->work.reset();
  impl_->ioc->stop();
  for (auto& t : impl_->threads) t.join();
  impl_->threads.clear();
  impl_->tcp->close();
  if (impl_->ws) impl_->ws->close();
  impl_->tcp.reset();
  impl_->ws.reset();
  impl_->ioc.reset();
}

}  // namespace daqwear
