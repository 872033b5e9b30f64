// Copyright 2026 The scenefoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenefoa/service/server.h"

#include <spdlog/spdlog.h>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "scenefoa/core/error.h"

namespace scenefoa::service {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

class WsConnection;

struct ServerState {
  ServerConfig config;
  std::shared_ptr<const ClipLibrary> library;
  std::shared_ptr<const foa::HrirSet> hrirs;
  net::io_context ioc;
  tcp::acceptor acceptor{net::make_strand(ioc)};
  std::optional<net::signal_set> signals;
  std::vector<std::thread> workers;
  std::atomic<uint64_t> next_session{0};

  mutable std::mutex mu;
  std::condition_variable cv;
  std::map<const WsConnection*, std::weak_ptr<WsConnection>> sessions;
  bool stop_requested = false;
  bool stopped = false;
  std::once_flag stop_once;

  ServerState(ServerConfig c, std::shared_ptr<const ClipLibrary> lib, std::shared_ptr<const foa::HrirSet> h)
      : config(std::move(c)), library(std::move(lib)), hrirs(std::move(h)), ioc(std::max(1, config.threads)) {}

  std::chrono::steady_clock::duration FramePeriod() const {
    const double seconds = static_cast<double>(kFrameSamples) / foa::kDefaultSampleRate / config.speed;
    return std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
  }

  void Register(const std::shared_ptr<WsConnection>& c) {
    std::lock_guard lock(mu);
    sessions[c.get()] = c;
  }
  void Unregister(const WsConnection* c) {
    std::lock_guard lock(mu);
    sessions.erase(c);
    cv.notify_all();
  }
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, ServerState& state)
      : ws_(std::move(socket)),
        state_(state),
        session_("s" + std::to_string(state.next_session++), state.library, state.hrirs),
        timer_(ws_.get_executor()) {}

  void Run(http::request<http::string_body> req) {
    websocket::stream_base::timeout timeouts;
    timeouts.handshake_timeout = std::chrono::seconds(5);
    timeouts.idle_timeout = websocket::stream_base::none();
    timeouts.keep_alive_pings = false;
    ws_.set_option(timeouts);
    ws_.async_accept(req, beast::bind_front_handler(&WsConnection::OnAccept, shared_from_this()));
  }

  // Thread-safe. Flushes queued messages, then sends a close frame.
  void Close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      self->closing_ = true;
      self->timer_.cancel();
      if (!self->writing_) self->DoWrite();
    });
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) return Finish();
    state_.Register(shared_from_this());
    spdlog::info("session {} opened", session_.id());
    DoRead();
  }

  void DoRead() { ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::OnRead, shared_from_this())); }

  void OnRead(beast::error_code ec, size_t) {
    if (ec) return Finish();
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    Enqueue(session_.HandleMessage(text));
    if (session_.playing() && !ticking_ && !closing_) {
      ticking_ = true;
      next_ = std::chrono::steady_clock::now();
      OnTick({});
    }
    DoRead();
  }

  void OnTick(beast::error_code ec) {
    if (ec || closing_) {
      ticking_ = false;
      return;
    }
    Enqueue(session_.NextFrame());
    if (!session_.playing()) {
      ticking_ = false;
      return;
    }
    next_ += state_.FramePeriod();
    timer_.expires_at(next_);
    timer_.async_wait(beast::bind_front_handler(&WsConnection::OnTick, shared_from_this()));
  }

  void Enqueue(std::vector<json> messages) {
    if (close_sent_) return;
    for (auto& m : messages) queue_.push_back(m.dump());
    if (!writing_) DoWrite();
  }

  void DoWrite() {
    if (queue_.empty()) {
      writing_ = false;
      if (closing_ && !close_sent_) {
        close_sent_ = true;
        writing_ = true;
        ws_.async_close(websocket::close_code::going_away,
                        [self = shared_from_this()](beast::error_code) { self->Finish(); });
      }
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsConnection::OnWrite, shared_from_this()));
  }

  void OnWrite(beast::error_code ec, size_t) {
    if (ec) return Finish();
    queue_.pop_front();
    DoWrite();
  }

  void Finish() {
    if (finished_) return;
    finished_ = true;
    timer_.cancel();
    spdlog::info("session {} closed", session_.id());
    state_.Unregister(this);
  }

  websocket::stream<beast::tcp_stream> ws_;
  ServerState& state_;
  Session session_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  net::steady_timer timer_;
  std::chrono::steady_clock::time_point next_;
  bool writing_ = false;
  bool ticking_ = false;
  bool closing_ = false;
  bool close_sent_ = false;
  bool finished_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, ServerState& state) : stream_(std::move(socket)), state_(state) {}

  void Run() { net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpConnection::DoRead, shared_from_this())); }

 private:
  void DoRead() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::OnRead, shared_from_this()));
  }

  void OnRead(beast::error_code ec, size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    const std::string target(req_.target().substr(0, req_.target().find('?')));
    if (websocket::is_upgrade(req_) && target == "/session") {
      stream_.expires_never();
      std::make_shared<WsConnection>(stream_.release_socket(), state_)->Run(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(req_.keep_alive());
    res->set(http::field::access_control_allow_origin, "*");
    if (target == "/clips" && req_.method() == http::verb::get) {
      res->result(http::status::ok);
      res->set(http::field::content_type, "application/json");
      res->body() = state_.library->ToJson().dump();
    } else {
      res->result(target == "/clips" ? http::status::method_not_allowed : http::status::not_found);
      res->set(http::field::content_type, "application/json");
      res->body() = ErrorMessage("not_found", target).dump();
    }
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, size_t) {
      if (ec) return;
      if (res->need_eof()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->DoRead();
    });
  }

  beast::tcp_stream stream_;
  ServerState& state_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

void DoAccept(ServerState& state) {
  state.acceptor.async_accept(net::make_strand(state.ioc), [&state](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != net::error::operation_aborted) spdlog::warn("accept: {}", ec.message());
      if (!state.acceptor.is_open()) return;
    } else {
      std::make_shared<HttpConnection>(std::move(socket), state)->Run();
    }
    DoAccept(state);
  });
}

}  // namespace

struct Server::Impl : ServerState {
  using ServerState::ServerState;
};

Server::Server(ServerConfig config, std::shared_ptr<const ClipLibrary> library, std::shared_ptr<const foa::HrirSet> hrirs)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(library), std::move(hrirs))) {}

Server::~Server() { Stop(); }

uint16_t Server::Start() {
  auto& s = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(s.config.address, ec);
  if (ec) throw Error(ErrorCode::kIo, "bad address '" + s.config.address + "'");
  const tcp::endpoint endpoint(address, s.config.port);
  auto fail = [&](const char* what) {
    throw Error(ErrorCode::kIo, std::string(what) + " " + s.config.address + ":" +
                                    std::to_string(s.config.port) + ": " + ec.message());
  };
  s.acceptor.open(endpoint.protocol(), ec);
  if (ec) fail("open");
  s.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  s.acceptor.bind(endpoint, ec);
  if (ec) fail("bind");
  s.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) fail("listen");
  const uint16_t port = s.acceptor.local_endpoint().port();
  DoAccept(s);
  for (int i = 0; i < std::max(1, s.config.threads); ++i) s.workers.emplace_back([&s] { s.ioc.run(); });
  spdlog::info("serving on {}:{}", s.config.address, port);
  return port;
}

void Server::Stop() {
  auto& s = *impl_;
  std::call_once(s.stop_once, [&s] {
    {
      std::lock_guard lock(s.mu);
      s.stop_requested = true;
      s.cv.notify_all();
    }
    net::post(s.acceptor.get_executor(), [&s] {
      beast::error_code ec;
      s.acceptor.close(ec);
      if (s.signals) s.signals->cancel(ec);
    });
    std::vector<std::shared_ptr<WsConnection>> open;
    {
      std::lock_guard lock(s.mu);
      for (auto& [key, weak] : s.sessions) {
        if (auto c = weak.lock()) open.push_back(std::move(c));
      }
    }
    for (auto& c : open) c->Close();
    open.clear();
    {
      std::unique_lock lock(s.mu);
      s.cv.wait_for(lock, std::chrono::seconds(3), [&s] { return s.sessions.empty(); });
    }
    s.ioc.stop();
    for (auto& t : s.workers) t.join();
    s.workers.clear();
    std::lock_guard lock(s.mu);
    s.stopped = true;
    s.cv.notify_all();
  });
}

void Server::Wait() {
  auto& s = *impl_;
  {
    std::unique_lock lock(s.mu);
    s.cv.wait(lock, [&s] { return s.stop_requested || s.stopped; });
  }
  Stop();
}

void Server::StopOnSignals() {
  auto& s = *impl_;
  s.signals.emplace(s.ioc, SIGINT, SIGTERM);
  s.signals->async_wait([&s](beast::error_code ec, int sig) {
    if (ec) return;
    spdlog::info("signal {}: shutting down", sig);
    std::lock_guard lock(s.mu);
    s.stop_requested = true;
    s.cv.notify_all();
  });
}

size_t Server::active_sessions() const {
  std::lock_guard lock(impl_->mu);
  return impl_->sessions.size();
}

}  // namespace scenefoa::service
