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

// Scenario driver: builds a live server with an injected clock and a seeded
// randomness stream, runs a scripted scenario against it over the wire
// protocol, and collects per-assertion verdicts.
//
// After the script the driver
//   - re-checks every server invariant,
//   - persists the state, restores it into a fresh server and re-checks,
//   - has already audited every accepted submission as it happened: the
//     session must have been opened with the right password and the PIN
//     must verify under the enrolled key within the protocol window.

#pragma once

#include "twod/crypto.hpp"
#include "twod/harness/virtual_clock.hpp"
#include "twod/harness/wire_client.hpp"
#include "twod/random.hpp"
#include "twod/server/auth_server.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twod::harness {

inline constexpr std::int64_t kDefaultEpoch = 1'750'000'000;
inline constexpr std::size_t kDefaultTraceCap = 400;

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TraceEvent {
  std::int64_t t = 0;
  std::string actor;
  std::string action;
  std::string result;
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Assertion> assertions;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::vector<TraceEvent> trace;
  std::size_t trace_dropped = 0;

  bool passed() const;
  std::size_t failed_count() const;
  nlohmann::json to_json() const;
};

enum class Transport { in_process, http };

// Simulated device: holds a key received through provisioning.
struct Device {
  std::string username;
  crypto::TotpKey key;

  crypto::Pin pin_for(std::string_view canonical, std::int64_t now) const;
};

struct LoginResult {
  std::string error;  // wire error code; empty on success
  std::string token;
  std::string identifier;  // canonical

  bool ok() const { return error.empty(); }
};

class ScenarioContext {
 public:
  ScenarioContext(server::ServerConfig config, server::AuthServer::ConfigCheck check,
                  std::uint64_t seed, Transport transport, ScenarioReport& report);
  ~ScenarioContext();

  ScenarioContext(const ScenarioContext&) = delete;
  ScenarioContext& operator=(const ScenarioContext&) = delete;

  VirtualClock& clock() { return clock_; }
  std::int64_t now() const { return clock_.now(); }
  // Scenario-side randomness (attacker guesses, human slips). The server
  // draws from its own stream derived from the same seed.
  RandomSource& rng() { return *scenario_rng_; }
  server::AuthServer& server() { return *server_; }
  const server::ServerConfig& config() const { return server_->config(); }

  bool check(const std::string& name, bool condition, const std::string& detail = {});
  void metric(const std::string& name, double value) { report_.metrics[name] = value; }
  void note(std::string text) { report_.notes.push_back(std::move(text)); }
  void trace(std::string actor, std::string action, std::string result);
  // Events after this are counted but not stored.
  void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }

  // Clock schedule: actions run in virtual-time order (ties keep insertion
  // order) with the clock set to their time first.
  void at(std::int64_t t, std::string label, std::function<void()> action);
  void run_schedule();

  // Registers over the wire, parses the provisioning payload into a device
  // and completes the confirmation round (login + approval).
  Device enroll(const std::string& username, const std::string& password,
                ids::IdentifierKind kind = ids::IdentifierKind::pattern);

  LoginResult login(const std::string& actor, const std::string& username,
                    const std::string& password);
  // Device to server. Returns "accepted", "rejected" or a wire error code.
  std::string submit(const std::string& actor, const std::string& username,
                     const std::string& canonical, const std::string& pin_hex);
  std::string approve(const std::string& actor, const Device& device,
                      const std::string& canonical);
  std::string manual(const std::string& actor, const std::string& token,
                     const std::string& digits);
  // Status string or wire error code.
  std::string status(const std::string& token);

  // Post-run checks; called by run_scenario.
  void finish();

 private:
  void audit_acceptance(const std::string& username, const std::string& canonical,
                        const std::optional<std::string>& pin_hex,
                        const std::optional<std::string>& digits);

  ScenarioReport& report_;
  VirtualClock clock_;
  std::uint64_t seed_;
  std::unique_ptr<RandomSource> scenario_rng_;
  std::shared_ptr<RandomSource> server_rng_;
  std::unique_ptr<server::AuthServer> server_;
  server::AuthServer::ConfigCheck check_;
  std::unique_ptr<wire::WireApi> api_;
  struct HttpHost;
  std::unique_ptr<HttpHost> http_;
  std::unique_ptr<WireClient> client_;

  std::mutex bookkeeping_;
  std::map<std::string, std::string> passwords_;
  std::map<std::string, crypto::TotpKey> keys_;
  // token -> (username, password matched the registered one)
  std::map<std::string, std::pair<std::string, bool>> logins_;
  std::size_t audited_ = 0;
  std::vector<std::string> safety_violations_;

  bool trace_enabled_ = true;
  struct Scheduled {
    std::int64_t t;
    std::size_t order;
    std::string label;
    std::function<void()> action;
  };
  std::vector<Scheduled> schedule_;
};

struct Scenario {
  std::string name;
  std::string description;
  server::ServerConfig config;
  server::AuthServer::ConfigCheck check = server::AuthServer::ConfigCheck::enforce;
  std::function<void(ScenarioContext&)> body;
};

struct RunOptions {
  std::uint64_t seed = 1;
  Transport transport = Transport::in_process;
};

// Never throws for scenario failures; an exception escaping the body is
// recorded as a failed assertion.
ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Cheap password hashing so that scenarios with 10^5 logins stay fast.
crypto::ScryptParams harness_password_params();
server::ServerConfig harness_config();

}  // namespace twod::harness
