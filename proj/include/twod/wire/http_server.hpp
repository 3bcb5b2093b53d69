/*
 * Copyright (C) 2026 The 2D2FA Project Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "twod/wire/api.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

namespace twod::wire {

struct HttpServerOptions {
  // Served at "/" when non-empty.
  std::filesystem::path static_dir;
  bool log_requests = true;
  // Periodic expire/release sweep; zero disables it.
  std::chrono::milliseconds tick_interval{1000};
  // Runs after each sweep, e.g. to persist state.
  std::function<void()> on_tick;
};

class HttpServer {
 public:
  HttpServer(const WireApi& api, HttpServerOptions options = {});
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  int bind_to_any_port(const std::string& host);

  // Blocks until stop().
  void listen();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twod::wire
