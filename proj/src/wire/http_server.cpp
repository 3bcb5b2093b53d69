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

#include "twod/wire/http_server.hpp"

#include "httplib.h"
#include "json.hpp"

#include <condition_variable>
#include <iostream>
#include <mutex>
#include <thread>

namespace twod::wire {

namespace {

// Session tokens are bearer handles; keep them out of the logs.
std::string redact(const std::string& path) {
  if (path.starts_with("/api/session/")) return "/api/session/*/status";
  return path;
}

}  // namespace

struct HttpServer::Impl {
  const WireApi& api;
  HttpServerOptions options;
  httplib::Server http;
  std::thread serve_thread;
  std::thread tick_thread;
  std::mutex tick_mutex;
  std::condition_variable tick_cv;
  bool stopping = false;

  Impl(const WireApi& a, HttpServerOptions o) : api(a), options(std::move(o)) {
    http.set_default_headers({{std::string(kVersionHeader), std::string(kProtocolVersion)}});

    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> version;
      if (req.has_header(std::string(kVersionHeader).c_str())) {
        version = req.get_header_value(std::string(kVersionHeader).c_str());
      }
      HttpResponse out = api.handle(req.method, req.path, req.body,
                                    version ? std::optional<std::string_view>(*version)
                                            : std::nullopt);
      res.status = out.status;
      res.set_content(out.body, "application/json");
    };
    http.Post(".*", route);
    http.Get("/api/.*", route);

    if (!options.static_dir.empty()) {
      http.set_mount_point("/", options.static_dir.string());
    }
    if (options.log_requests) {
      http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        const nlohmann::json line = {
            {"ts", std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count()},
            {"method", req.method},
            {"path", redact(req.path)},
            {"status", res.status},
        };
        std::clog << line.dump() << '\n';
      });
    }
  }

  void start_ticker() {
    if (options.tick_interval.count() <= 0 || tick_thread.joinable()) return;
    tick_thread = std::thread([this] {
      std::unique_lock lock(tick_mutex);
      while (!tick_cv.wait_for(lock, options.tick_interval, [this] { return stopping; })) {
        lock.unlock();
        try {
          api.server().tick(api.now());
          if (options.on_tick) options.on_tick();
        } catch (const std::exception& e) {
          std::clog << nlohmann::json{{"event", "tick_failed"}, {"error", e.what()}}.dump()
                    << '\n';
        }
        lock.lock();
      }
    });
  }
};

HttpServer::HttpServer(const WireApi& api, HttpServerOptions options)
    : impl_(std::make_unique<Impl>(api, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

int HttpServer::bind_to_any_port(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

void HttpServer::listen() {
  impl_->start_ticker();
  impl_->http.listen_after_bind();
}

void HttpServer::start() {
  impl_->start_ticker();
  impl_->serve_thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void HttpServer::stop() {
  if (!impl_) return;
  {
    std::lock_guard lock(impl_->tick_mutex);
    impl_->stopping = true;
  }
  impl_->tick_cv.notify_all();
  impl_->http.stop();
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
  if (impl_->tick_thread.joinable()) impl_->tick_thread.join();
}

}  // namespace twod::wire
