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

#include "fixtures.hpp"
#include "sha256_oracle.hpp"
#include "twod/agent/agent.hpp"
#include "twod/wire/api.hpp"
#include "twod/wire/http_server.hpp"

#include "httplib.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

namespace {

using twod::agent::Account;
using twod::agent::Agent;
using twod::agent::AgentError;
using twod::agent::AgentErrorCode;
using twod::agent::EnrollmentStore;
using twod::agent::StoreError;
using twod::agent::SubmitOutcome;

const twod::crypto::ScryptParams kCheapKdf{.n = 16, .r = 1, .p = 1};

class RecordingTransport : public twod::agent::Transport {
 public:
  SubmitOutcome submit(const std::string& url, const twod::agent::SubmitRequest& r) override {
    calls.push_back({url, r});
    return outcome;
  }
  std::vector<std::pair<std::string, twod::agent::SubmitRequest>> calls;
  SubmitOutcome outcome = SubmitOutcome::accepted;
};

AgentErrorCode agent_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const AgentError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an AgentError";
  return AgentErrorCode::network;
}

twod::crypto::TotpKey fixed_key(std::uint8_t b) {
  std::array<std::uint8_t, 16> raw;
  raw.fill(b);
  return twod::crypto::TotpKey(raw);
}

std::string payload(const std::string& user, twod::ids::IdentifierKind kind,
                    std::uint8_t key_byte = 0x0b, const std::string& server = "demo") {
  return twod::ProvisioningPayload{server, user, fixed_key(key_byte), kind}.to_uri();
}

class AgentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("twod_agent_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  EnrollmentStore store(const std::string& pass = "hunter2") const {
    return EnrollmentStore(dir / "agent.store", pass, kCheapKdf);
  }

  std::filesystem::path dir;
};

TEST_F(AgentTest, StoreRoundTripIsSealedAndPrivate) {
  const auto s = store();
  EXPECT_TRUE(s.load().empty());
  RecordingTransport t;
  Agent agent(s, t);
  agent.enroll(payload("alice", twod::ids::IdentifierKind::pattern), "http://127.0.0.1:1");
  agent.enroll(payload("bob", twod::ids::IdentifierKind::qr, 0x22), "http://127.0.0.1:2");

  const auto accounts = store().load();
  ASSERT_EQ(accounts.size(), 2u);
  EXPECT_EQ(accounts[0].label(), "alice@demo");
  EXPECT_EQ(accounts[0].key, fixed_key(0x0b));
  EXPECT_EQ(accounts[1].kind, twod::ids::IdentifierKind::qr);
  EXPECT_EQ(accounts[1].server_url, "http://127.0.0.1:2");

  std::ifstream in(s.path());
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_TRUE(text.starts_with("2D2FA-AGENT 1\n"));
  EXPECT_EQ(text.find(fixed_key(0x0b).to_hex()), std::string::npos);
  EXPECT_EQ(text.find("alice"), std::string::npos);
  EXPECT_EQ(std::filesystem::status(s.path()).permissions() & std::filesystem::perms::all,
            std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
}

TEST_F(AgentTest, WrongPassphraseAndTamperingAreDetected) {
  RecordingTransport t;
  Agent(store(), t).enroll(payload("alice", twod::ids::IdentifierKind::pattern), "u");
  EXPECT_THROW(store("hunter3").load(), StoreError);
  EXPECT_THROW(EnrollmentStore(dir / "x", "", kCheapKdf), StoreError);

  std::fstream f(dir / "agent.store", std::ios::in | std::ios::out | std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(f)), {});
  const auto pos = text.find("\"sealed\":\"") + 20;
  text[pos] = text[pos] == '0' ? '1' : '0';
  f.seekp(0);
  f << text;
  f.close();
  EXPECT_THROW(store().load(), StoreError);

  std::ofstream(dir / "agent.store", std::ios::trunc) << "2D2FA-AGENT 9\n{}";
  EXPECT_THROW(store().load(), StoreError);
  std::ofstream(dir / "agent.store", std::ios::trunc) << "2D2FA-AGENT 1\n{\"kdf\":";
  EXPECT_THROW(store().load(), StoreError);
}

TEST_F(AgentTest, ConcurrentUpdatesAreSerialized) {
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      RecordingTransport t;
      Agent(store(), t).enroll(payload("user" + std::to_string(i), twod::ids::IdentifierKind::numeric), "u");
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store().load().size(), 8u);
}

TEST_F(AgentTest, EnrollRejectsBadAndDuplicatePayloads) {
  RecordingTransport t;
  Agent agent(store(), t);
  EXPECT_EQ(agent_error([&] { agent.enroll("2d2fa://enroll?sn=x", "u"); }),
            AgentErrorCode::malformed_payload);
  agent.enroll(payload("alice", twod::ids::IdentifierKind::pattern), "u");
  EXPECT_EQ(agent_error([&] { agent.enroll(payload("alice", twod::ids::IdentifierKind::qr, 1), "u"); }),
            AgentErrorCode::duplicate_enrollment);
  // Same username on another server is a different account.
  EXPECT_NO_THROW(agent.enroll(payload("alice", twod::ids::IdentifierKind::qr, 1, "other"), "u"));
  EXPECT_TRUE(t.calls.empty());
}

TEST_F(AgentTest, ApproveComputesMacForCanonicalIdentifier) {
  RecordingTransport t;
  Agent agent(store(), t);
  agent.enroll(payload("alice", twod::ids::IdentifierKind::pattern), "http://srv");
  const std::int64_t now = 53'333'333LL * 30 + 7;
  const auto a = agent.approve("alice@demo", "1236", now);
  EXPECT_EQ(a.identifier, "PT:1236");
  EXPECT_EQ(a.outcome, SubmitOutcome::accepted);
  ASSERT_EQ(t.calls.size(), 1u);
  EXPECT_EQ(t.calls[0].first, "http://srv");
  EXPECT_EQ(t.calls[0].second.username, "alice");
  EXPECT_EQ(t.calls[0].second.identifier, "PT:1236");
  // Independent oracle over the same key and message.
  EXPECT_EQ(t.calls[0].second.pin_hex,
            oracle::hex(oracle::hmac_sha256(std::vector<std::uint8_t>(16, 0x0b),
                                            oracle::bytes("PT:1236|53333333"))));
  EXPECT_EQ(t.calls[0].second.pin_hex,
            "211b4a28d6e9b8641231bd7af1724d8dd2e52dd80466d8343b398174d18a5fb7");
  // The canonical form is accepted as input too.
  agent.approve("alice@demo", "PT:1236", now);
  EXPECT_EQ(t.calls[1].second.pin_hex, t.calls[0].second.pin_hex);

  t.outcome = SubmitOutcome::rejected;
  EXPECT_EQ(agent.approve("alice@demo", "1258", now).outcome, SubmitOutcome::rejected);
}

TEST_F(AgentTest, InvalidInputNeverReachesTheNetwork) {
  RecordingTransport t;
  Agent agent(store(), t);
  agent.enroll(payload("alice", twod::ids::IdentifierKind::pattern), "u");
  agent.enroll(payload("nora", twod::ids::IdentifierKind::numeric), "u");
  const std::int64_t now = fixtures::kT0;
  for (const auto* bad : {"1324", "1", "12a4", "", "QR:Ab3dE5gH9jK1", "NUM:0427", "PT:1324"}) {
    EXPECT_EQ(agent_error([&] { agent.approve("alice@demo", bad, now); }),
              AgentErrorCode::invalid_identifier)
        << bad;
  }
  for (const auto* bad : {"123", "12345", "PT:1234", "abcd"}) {
    EXPECT_EQ(agent_error([&] { agent.approve("nora@demo", bad, now); }),
              AgentErrorCode::invalid_identifier)
        << bad;
  }
  EXPECT_EQ(agent_error([&] { agent.approve("ghost@demo", "1234", now); }),
            AgentErrorCode::unknown_account);
  EXPECT_TRUE(t.calls.empty());
  EXPECT_EQ(agent.approve("nora@demo", "0427", now).identifier, "NUM:0427");
}

TEST_F(AgentTest, OfflineCodeIsTruncationOfOnlineMac) {
  RecordingTransport t;
  Agent agent(store(), t);
  agent.enroll(payload("alice", twod::ids::IdentifierKind::pattern), "u");
  twod::SeededRandom rng(3);
  const auto patterns = twod::ids::enumerate_patterns(4);
  for (int i = 0; i < 200; ++i) {
    const auto& p = patterns[rng.uniform(patterns.size())];
    const std::int64_t now = fixtures::kT0 + static_cast<std::int64_t>(rng.uniform(1'000'000));
    const auto online = agent.approve("alice@demo", p.to_string(), now);
    const auto offline = agent.approve_offline("alice@demo", p.to_string(), now);
    EXPECT_EQ(offline.identifier, online.identifier);
    const auto raw = oracle::unhex(t.calls.back().second.pin_hex);
    oracle::Digest mac{};
    std::copy(raw.begin(), raw.end(), mac.begin());
    ASSERT_EQ(offline.digits, oracle::truncate8(mac));
  }
  EXPECT_EQ(t.calls.size(), 200u);
}

TEST_F(AgentTest, ListAndRemove) {
  RecordingTransport t;
  Agent agent(store(), t);
  agent.enroll(payload("zed", twod::ids::IdentifierKind::pattern), "u");
  agent.enroll(payload("a@b", twod::ids::IdentifierKind::pattern, 3, "srv"), "u");
  agent.enroll(payload("amy", twod::ids::IdentifierKind::qr), "u");
  EXPECT_EQ(agent.list(), (std::vector<std::string>{"a@b@srv", "amy@demo", "zed@demo"}));
  // Lookup matches the whole label, so an '@' in the username is harmless.
  EXPECT_EQ(agent.approve("a@b@srv", "1234", fixtures::kT0).identifier, "PT:1234");
  EXPECT_EQ(agent_error([&] { agent.approve("b@srv", "1234", fixtures::kT0); }),
            AgentErrorCode::unknown_account);
  agent.remove("amy@demo");
  EXPECT_EQ(agent.list(), (std::vector<std::string>{"a@b@srv", "zed@demo"}));
  EXPECT_EQ(agent_error([&] { agent.remove("amy@demo"); }), AgentErrorCode::unknown_account);
}

TEST_F(AgentTest, HttpTransportAgainstLiveServer) {
  auto server = fixtures::make_server();
  std::int64_t now = fixtures::kT0;
  twod::wire::WireApi api(*server, [&] { return now; });
  twod::wire::HttpServer http(api, {.static_dir = {},
                                    .log_requests = false,
                                    .tick_interval = std::chrono::milliseconds(0),
                                    .on_tick = {}});
  const int port = http.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  http.start();
  const std::string url = "http://127.0.0.1:" + std::to_string(port);

  const auto reg = server->register_user("alice", "pw", twod::ids::IdentifierKind::pattern);
  twod::agent::HttpTransport transport;
  Agent agent(store(), transport);
  agent.enroll(reg.payload.to_uri(), url);
  const auto ticket = server->begin_login("alice", "pw", now);
  const auto bare = ticket.identifier.bare();
  EXPECT_EQ(agent.approve("alice@2d2fa.local", bare, now).outcome, SubmitOutcome::accepted);
  EXPECT_EQ(server->session_status(ticket.session_token, now),
            twod::server::SessionStatus::succeeded);
  EXPECT_EQ(agent.approve("alice@2d2fa.local", bare, now).outcome, SubmitOutcome::rejected);
  http.stop();

  EXPECT_EQ(agent_error([&] { agent.approve("alice@2d2fa.local", bare, now); }),
            AgentErrorCode::network);
}

TEST_F(AgentTest, HttpTransportSurfacesErrorEnvelope) {
  httplib::Server fake;
  fake.Post("/api/2fa/submit", [](const httplib::Request& req, httplib::Response& res) {
    res.status = req.get_header_value("X-2D2FA-Version") == "1" ? 400 : 500;
    res.set_content(R"({"ok":false,"data":null,"error":{"code":"MALFORMED","message":"m"}})",
                    "application/json");
  });
  const int port = fake.bind_to_any_port("127.0.0.1");
  std::thread th([&] { fake.listen_after_bind(); });
  fake.wait_until_ready();
  twod::agent::HttpTransport transport;
  try {
    transport.submit("http://127.0.0.1:" + std::to_string(port), {"a", "PT:1234", std::string(64, '0')});
    ADD_FAILURE() << "expected server_error";
  } catch (const AgentError& e) {
    EXPECT_EQ(e.code(), AgentErrorCode::server_error);
    EXPECT_NE(std::string(e.what()).find("MALFORMED"), std::string::npos);
  }
  fake.stop();
  th.join();
}

}  // namespace
