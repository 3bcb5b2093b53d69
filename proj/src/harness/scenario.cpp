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

#include "twod/harness/scenario.hpp"

#include "twod/provisioning.hpp"
#include "twod/wire/http_server.hpp"

#include <algorithm>
#include <exception>

namespace twod::harness {

namespace {

using nlohmann::json;
using server::AuthServer;
using server::SessionStatus;

// Decorrelates the server stream from the scenario stream.
constexpr std::uint64_t kScenarioStreamSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

bool ScenarioReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

std::size_t ScenarioReport::failed_count() const {
  return static_cast<std::size_t>(std::count_if(
      assertions.begin(), assertions.end(), [](const Assertion& a) { return !a.passed; }));
}

json ScenarioReport::to_json() const {
  json a = json::array();
  for (const auto& x : assertions) {
    a.push_back({{"name", x.name}, {"verdict", x.passed ? "pass" : "fail"}, {"detail", x.detail}});
  }
  json t = json::array();
  for (const auto& e : trace) {
    t.push_back({{"t", e.t}, {"actor", e.actor}, {"action", e.action}, {"result", e.result}});
  }
  return {{"scenario", scenario}, {"seed", seed},         {"passed", passed()},
          {"assertions", a},      {"metrics", metrics},   {"notes", notes},
          {"trace", t},           {"trace_dropped", trace_dropped}};
}

crypto::Pin Device::pin_for(std::string_view canonical, std::int64_t now) const {
  return crypto::generate_pin(key, canonical, crypto::derive_time_slice(now));
}

struct ScenarioContext::HttpHost {
  std::unique_ptr<wire::HttpServer> server;
};

ScenarioContext::ScenarioContext(server::ServerConfig config, AuthServer::ConfigCheck check,
                                 std::uint64_t seed, Transport transport, ScenarioReport& report)
    : report_(report),
      clock_(kDefaultEpoch),
      seed_(seed),
      scenario_rng_(std::make_unique<SeededRandom>(seed ^ kScenarioStreamSalt)),
      server_rng_(std::make_shared<SeededRandom>(seed)),
      check_(check) {
  server_ = std::make_unique<AuthServer>(std::move(config), server_rng_, check);
  api_ = std::make_unique<wire::WireApi>(*server_, [this] { return clock_.now(); });
  if (transport == Transport::http) {
    http_ = std::make_unique<HttpHost>();
    http_->server = std::make_unique<wire::HttpServer>(
        *api_, wire::HttpServerOptions{.static_dir = {},
                                       .log_requests = false,
                                       .tick_interval = std::chrono::milliseconds(0),
                                       .on_tick = {}});
    const int port = http_->server->bind_to_any_port("127.0.0.1");
    if (port <= 0) throw std::runtime_error("harness: cannot bind a local port");
    http_->server->start();
    client_ = make_http_client("http://127.0.0.1:" + std::to_string(port));
  } else {
    client_ = make_in_process_client(*api_);
  }
}

ScenarioContext::~ScenarioContext() {
  if (http_) http_->server->stop();
}

bool ScenarioContext::check(const std::string& name, bool condition, const std::string& detail) {
  std::lock_guard lock(bookkeeping_);
  report_.assertions.push_back({name, condition, detail});
  return condition;
}

void ScenarioContext::trace(std::string actor, std::string action, std::string result) {
  std::lock_guard lock(bookkeeping_);
  if (!trace_enabled_ || report_.trace.size() >= kDefaultTraceCap) {
    ++report_.trace_dropped;
    return;
  }
  report_.trace.push_back({clock_.now(), std::move(actor), std::move(action), std::move(result)});
}

void ScenarioContext::at(std::int64_t t, std::string label, std::function<void()> action) {
  schedule_.push_back({t, schedule_.size(), std::move(label), std::move(action)});
}

void ScenarioContext::run_schedule() {
  auto pending = std::move(schedule_);
  schedule_.clear();
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Scheduled& a, const Scheduled& b) { return a.t < b.t; });
  for (auto& step : pending) {
    clock_.set(step.t);
    trace("schedule", step.label, "");
    step.action();
  }
}

Device ScenarioContext::enroll(const std::string& username, const std::string& password,
                               ids::IdentifierKind kind) {
  const auto reply = client_->call(
      "POST", "/api/register",
      {{"username", username}, {"password", password}, {"kind", ids::to_string(kind)}});
  if (!reply.ok()) {
    throw std::runtime_error("harness: register " + username + " failed: " + reply.error_code());
  }
  const auto payload =
      ProvisioningPayload::parse(reply.data().at("provisioning_payload").get<std::string>());
  if (!payload) throw std::runtime_error("harness: unparseable provisioning payload");
  trace(username, "register", "ok");
  Device device{username, payload->key};
  {
    std::lock_guard lock(bookkeeping_);
    passwords_[username] = password;
    keys_.insert_or_assign(username, payload->key);
  }

  const auto ticket = login(username, username, password);
  if (!ticket.ok()) throw std::runtime_error("harness: confirmation login failed: " + ticket.error);
  const auto result = approve(username, device, ticket.identifier);
  const auto record = server_->find_user(username);
  check("setup: " + username + " completes the confirmation round",
        result == "accepted" && record && record->enrolled, result);
  return device;
}

LoginResult ScenarioContext::login(const std::string& actor, const std::string& username,
                                   const std::string& password) {
  const auto reply =
      client_->call("POST", "/api/login", {{"username", username}, {"password", password}});
  LoginResult out;
  if (!reply.ok()) {
    out.error = reply.error_code();
    trace(actor, "login " + username, out.error);
    return out;
  }
  out.token = reply.data().at("session_token").get<std::string>();
  out.identifier = reply.data().at("identifier").at("canonical").get<std::string>();
  {
    std::lock_guard lock(bookkeeping_);
    const auto known = passwords_.find(username);
    logins_[out.token] = {username, known != passwords_.end() && known->second == password};
  }
  trace(actor, "login " + username, out.identifier);
  return out;
}

std::string ScenarioContext::submit(const std::string& actor, const std::string& username,
                                    const std::string& canonical, const std::string& pin_hex) {
  const auto reply = client_->call(
      "POST", "/api/2fa/submit",
      {{"username", username}, {"identifier", canonical}, {"pin", pin_hex}});
  std::string result =
      reply.ok() ? reply.data().at("result").get<std::string>() : reply.error_code();
  trace(actor, "submit " + username + " " + canonical, result);
  if (result == "accepted") audit_acceptance(username, canonical, pin_hex, std::nullopt);
  return result;
}

std::string ScenarioContext::approve(const std::string& actor, const Device& device,
                                     const std::string& canonical) {
  return submit(actor, device.username, canonical, device.pin_for(canonical, now()).to_hex());
}

std::string ScenarioContext::manual(const std::string& actor, const std::string& token,
                                    const std::string& digits) {
  const auto reply =
      client_->call("POST", "/api/2fa/manual", {{"session_token", token}, {"pin8", digits}});
  std::string result =
      reply.ok() ? reply.data().at("result").get<std::string>() : reply.error_code();
  trace(actor, "manual", result);
  if (result == "accepted") {
    std::string username;
    {
      std::lock_guard lock(bookkeeping_);
      if (auto it = logins_.find(token); it != logins_.end()) username = it->second.first;
    }
    std::string canonical;
    for (const auto& s : server_->sessions()) {
      if (s.token == token) canonical = s.identifier.canonical();
    }
    audit_acceptance(username, canonical, std::nullopt, digits);
  }
  return result;
}

std::string ScenarioContext::status(const std::string& token) {
  const auto reply = client_->call("GET", "/api/session/" + token + "/status", nullptr);
  return reply.ok() ? reply.data().at("status").get<std::string>() : reply.error_code();
}

// Independent re-check of an acceptance: the harness knows the enrolled key
// and which logins used the right password, and verifies against the
// protocol window rather than whatever the server is configured with.
void ScenarioContext::audit_acceptance(const std::string& username, const std::string& canonical,
                                       const std::optional<std::string>& pin_hex,
                                       const std::optional<std::string>& digits) {
  const std::int64_t t = now();
  std::optional<std::string> token;
  for (const auto& s : server_->sessions()) {
    if (s.username == username && s.identifier.canonical() == canonical &&
        s.status == SessionStatus::succeeded && s.completed_at == t) {
      token = s.token;
    }
  }
  std::lock_guard lock(bookkeeping_);
  ++audited_;
  const std::string where = username + " " + canonical + " at " + std::to_string(t);
  if (!token) {
    safety_violations_.push_back(where + ": accepted without a succeeded session");
    return;
  }
  const auto login = logins_.find(*token);
  if (login == logins_.end() || !login->second.second) {
    safety_violations_.push_back(where + ": succeeded without the registered password");
  }
  const auto key = keys_.find(username);
  if (key == keys_.end()) {
    safety_violations_.push_back(where + ": succeeded for a user the harness never enrolled");
    return;
  }
  const auto slice = crypto::derive_time_slice(t);
  bool valid = false;
  if (pin_hex) {
    const auto pin = crypto::Pin::from_hex(*pin_hex);
    valid = pin && crypto::verify_pin(key->second, canonical, pin->bytes(), slice,
                                      crypto::kDefaultWindow);
  } else if (digits) {
    valid = crypto::match_truncated_pin(key->second, canonical, *digits, slice,
                                        crypto::kDefaultWindow)
                .has_value();
  }
  if (!valid) safety_violations_.push_back(where + ": PIN is not valid within the window");
}

void ScenarioContext::finish() {
  const std::int64_t t = now();
  const auto live = server_->check_invariants(t);
  check("final state satisfies every server invariant", live.empty(),
        live.empty() ? "" : live.front());

  std::array<std::uint8_t, 32> master{};
  scenario_rng_->fill(master);
  std::string detail;
  bool restored_ok = false;
  try {
    const std::string snap = server_->snapshot(master);
    auto restored = AuthServer::restore(snap, master, server_->config(),
                                        std::make_shared<SeededRandom>(seed_ + 1), check_);
    const auto again = restored->check_invariants(t);
    const auto before = server_->sessions();
    const auto after = restored->sessions();
    const bool same_sessions =
        before.size() == after.size() &&
        std::equal(before.begin(), before.end(), after.begin(), [](const auto& a, const auto& b) {
          return a.token == b.token && a.status == b.status && a.identifier == b.identifier &&
                 a.completed_at == b.completed_at;
        });
    restored_ok = again.empty() && same_sessions && restored->snapshot(master).size() == snap.size();
    if (!again.empty()) detail = again.front();
    if (!same_sessions) detail = "restored sessions differ";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  check("persisted state restores and satisfies every server invariant", restored_ok, detail);

  std::lock_guard lock(bookkeeping_);
  report_.metrics["audited_acceptances"] = static_cast<double>(audited_);
  const bool safe = safety_violations_.empty();
  report_.assertions.push_back(
      {"every acceptance had the password and a window-valid PIN", safe,
       safe ? std::to_string(audited_) + " audited" : safety_violations_.front()});
}

ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options) {
  ScenarioReport report;
  report.scenario = scenario.name;
  report.seed = options.seed;
  std::unique_ptr<ScenarioContext> ctx;
  try {
    ctx = std::make_unique<ScenarioContext>(scenario.config, scenario.check, options.seed,
                                            options.transport, report);
    scenario.body(*ctx);
  } catch (const std::exception& e) {
    report.assertions.push_back({"scenario ran to completion", false, e.what()});
  }
  if (ctx) {
    try {
      ctx->finish();
    } catch (const std::exception& e) {
      report.assertions.push_back({"post-run checks completed", false, e.what()});
    }
  }
  return report;
}

crypto::ScryptParams harness_password_params() { return {.n = 16, .r = 1, .p = 1}; }

server::ServerConfig harness_config() {
  server::ServerConfig config;
  config.password_hash = harness_password_params();
  return config;
}

}  // namespace twod::harness
