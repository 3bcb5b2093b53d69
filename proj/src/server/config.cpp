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

#include "twod/server/config.hpp"

namespace twod::server {

namespace {

constexpr std::size_t kNumericSpace = 10000;

}  // namespace

const ids::IdentifierDictionary& ServerConfig::dictionary() const {
  if (!pattern_dictionary) {
    throw ConfigError("no pattern dictionary configured");
  }
  return *pattern_dictionary;
}

void ServerConfig::validate() const {
  if (server_name.empty()) {
    throw ConfigError("server_name must not be empty");
  }
  if (session_timeout_s <= 0) {
    throw ConfigError("session_timeout_s must be positive");
  }
  if (max_concurrent_sessions_per_user < 1) {
    throw ConfigError("max_concurrent_sessions_per_user must be at least 1");
  }
  const std::int64_t drift_window_s = 2 * static_cast<std::int64_t>(slice_window) * crypto::kSliceSeconds;
  if (identifier_cooldown_s < drift_window_s) {
    throw ConfigError("identifier_cooldown_s (" + std::to_string(identifier_cooldown_s) +
                      ") must cover the drift window of " + std::to_string(drift_window_s) + " s");
  }
  const std::size_t required = 2 * max_concurrent_sessions_per_user;
  if (dictionary().kind() != ids::IdentifierKind::pattern) {
    throw ConfigError("pattern_dictionary must hold pattern identifiers");
  }
  if (dictionary().size() < required) {
    throw ConfigError("pattern dictionary holds " + std::to_string(dictionary().size()) +
                      " entries; at least " + std::to_string(required) + " are required");
  }
  if (kNumericSpace < required) {
    throw ConfigError("numeric identifier space is too small for the concurrency limit");
  }
}

}  // namespace twod::server
