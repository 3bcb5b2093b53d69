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

// Shared helpers: cheap password hashing, seeded servers and a tiny device.

#pragma once

#include "twod/crypto.hpp"
#include "twod/random.hpp"
#include "twod/server/auth_server.hpp"

#include <memory>
#include <string>

namespace fixtures {

inline constexpr std::int64_t kT0 = 1'700'000'010;

inline twod::crypto::ScryptParams cheap_scrypt() { return {.n = 16, .r = 1, .p = 1}; }

inline twod::server::ServerConfig cheap_config() {
  twod::server::ServerConfig config;
  config.password_hash = cheap_scrypt();
  return config;
}

inline std::unique_ptr<twod::server::AuthServer> make_server(
    twod::server::ServerConfig config = cheap_config(), std::uint64_t seed = 7,
    twod::server::AuthServer::ConfigCheck check = twod::server::AuthServer::ConfigCheck::enforce) {
  return std::make_unique<twod::server::AuthServer>(
      std::move(config), std::make_shared<twod::SeededRandom>(seed), check);
}

inline twod::crypto::Pin pin_at(const twod::crypto::TotpKey& key, const std::string& canonical,
                                std::int64_t now) {
  return twod::crypto::generate_pin(key, canonical, twod::crypto::derive_time_slice(now));
}

// Registers and completes the confirmation round; returns the device key.
inline twod::crypto::TotpKey enroll(twod::server::AuthServer& server, const std::string& username,
                                    const std::string& password, std::int64_t& now,
                                    twod::ids::IdentifierKind kind =
                                        twod::ids::IdentifierKind::pattern) {
  const auto reg = server.register_user(username, password, kind);
  const auto ticket = server.begin_login(username, password, now);
  const auto pin = pin_at(reg.totp_key, ticket.identifier.canonical(), now);
  server.submit_second_factor(username, ticket.identifier.canonical(), pin.bytes(), now);
  // Let the confirmation identifier cool down so tests start from a full pool.
  now += server.config().identifier_cooldown_s + 1;
  return reg.totp_key;
}

}  // namespace fixtures
