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

// twod-server: the reference authentication server over HTTP.
//
// Configuration comes from --config, else $TWOD_CONFIG; TWOD_BIND_ADDR and
// TWOD_STATE_PATH override the file. With a state path the server restores
// from it on start (and refuses to start on a corrupt file) and persists
// after every sweep that saw a change.

#include "twod/random.hpp"
#include "twod/server/auth_server.hpp"
#include "twod/wire/http_server.hpp"
#include "twod/wire/settings.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool split_bind(const std::string& addr, std::string& host, int& port) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) return false;
  host = addr.substr(0, colon);
  try {
    std::size_t used = 0;
    port = std::stoi(addr.substr(colon + 1), &used);
    return used == addr.size() - colon - 1 && port >= 0 && port <= 65535;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D-2FA authentication server"};
  std::string config_path, bind, state_path, static_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--bind", bind, "host:port (overrides config and TWOD_BIND_ADDR)");
  app.add_option("--state", state_path, "State file (overrides config and TWOD_STATE_PATH)");
  app.add_option("--static", static_dir, "Directory served at /");
  app.add_flag("--quiet", quiet, "Do not log requests");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  using twod::server::AuthServer;
  twod::wire::Settings settings;
  std::unique_ptr<AuthServer> server;
  try {
    settings = twod::wire::load_settings(
        config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    if (!bind.empty()) settings.bind_addr = bind;
    if (!state_path.empty()) settings.state_path = state_path;
    if (!static_dir.empty()) settings.static_dir = static_dir;

    auto rng = std::make_shared<twod::SystemRandom>();
    if (!settings.state_path.empty()) {
      if (!settings.master_key) {
        std::cerr << "twod-server: a state path needs master_key in the configuration\n";
        return 2;
      }
      if (std::filesystem::exists(settings.state_path)) {
        server = AuthServer::restore_file(settings.state_path, *settings.master_key,
                                          settings.server, rng);
        std::clog << "restored state from " << settings.state_path << '\n';
      }
    }
    if (!server) server = std::make_unique<AuthServer>(settings.server, rng);
  } catch (const twod::server::StateError& e) {
    std::cerr << "twod-server: refusing to start: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "twod-server: " << e.what() << '\n';
    return 2;
  }

  std::string host;
  int port = 0;
  if (!split_bind(settings.bind_addr, host, port)) {
    std::cerr << "twod-server: bad bind address '" << settings.bind_addr << "'\n";
    return 2;
  }

  twod::wire::WireApi api(*server, unix_now);
  std::uint64_t persisted_generation = server->generation();
  auto persist = [&] {
    if (settings.state_path.empty()) return;
    const auto generation = server->generation();
    if (generation == persisted_generation) return;
    try {
      server->persist(settings.state_path, *settings.master_key);
      persisted_generation = generation;
    } catch (const std::exception& e) {
      std::cerr << "twod-server: persist failed: " << e.what() << '\n';
    }
  };

  twod::wire::HttpServer http(api, {.static_dir = settings.static_dir,
                                    .log_requests = !quiet,
                                    .tick_interval = std::chrono::seconds(1),
                                    .on_tick = persist});
  const int bound = http.bind(host, port);
  if (bound < 0) {
    std::cerr << "twod-server: cannot bind " << settings.bind_addr << '\n';
    return 2;
  }
  std::clog << "listening on " << host << ':' << bound << '\n';

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  http.start();
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  http.stop();
  persist();
  return 0;
}
