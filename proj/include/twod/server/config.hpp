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

#include "twod/crypto.hpp"
#include "twod/identifier.hpp"
#include "twod/secrets.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace twod::server {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerConfig {
  std::string server_name = "2d2fa.local";
  std::uint32_t slice_window = crypto::kDefaultWindow;
  std::int64_t session_timeout_s = 30;
  std::int64_t identifier_cooldown_s = 120;
  std::size_t max_concurrent_sessions_per_user = 5;
  // Kind used for decoy sessions of unknown usernames.
  ids::IdentifierKind decoy_kind = ids::IdentifierKind::pattern;
  // Built from DictionaryOptions{} when unset.
  std::optional<ids::IdentifierDictionary> pattern_dictionary;
  crypto::ScryptParams password_hash;

  // Throws ConfigError. Requires a pattern dictionary to be present.
  //  - identifier_cooldown_s >= 2 * slice_window * 30, so a PIN seen on the
  //    wire has left the verification window before its identifier is
  //    reissued;
  //  - every identifier source holds at least 2 * max_concurrent entries.
  void validate() const;

  const ids::IdentifierDictionary& dictionary() const;
};

}  // namespace twod::server
