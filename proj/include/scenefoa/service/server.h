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

#ifndef SCENEFOA_SERVICE_SERVER_H_
#define SCENEFOA_SERVICE_SERVER_H_

#include <cstdint>
#include <memory>
#include <string>

#include "scenefoa/foa/hrir.h"
#include "scenefoa/service/session.h"

namespace scenefoa::service {

struct ServerConfig {
  std::string address = "127.0.0.1";
  uint16_t port = 0;  // 0 picks a free port
  int threads = 2;
  // Audio frames go out every kFrameSamples / sample_rate / speed seconds.
  double speed = 1.0;
};

// WebSocket endpoint /session and HTTP GET /clips on one port.
class Server {
 public:
  Server(ServerConfig config, std::shared_ptr<const ClipLibrary> library,
         std::shared_ptr<const foa::HrirSet> hrirs);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the worker threads; returns the bound port. Throws kIo
  // when the address is unavailable.
  uint16_t Start();
  // Stops accepting, sends close frames to every open session after its
  // queued frames, and joins the workers.
  void Stop();
  // Blocks until Stop() has been called from another thread or a signal.
  void Wait();
  // Makes SIGINT and SIGTERM call Stop().
  void StopOnSignals();

  size_t active_sessions() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scenefoa::service

#endif  // SCENEFOA_SERVICE_SERVER_H_
