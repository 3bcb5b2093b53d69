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

#include "twod/secrets.hpp"
#include "twod/server/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace twod::wire {

// Deployment settings: the protocol config plus where to listen, where state
// lives and the master key that seals 2FA keys at rest.
struct Settings {
  server::ServerConfig server;
  std::string bind_addr = "127.0.0.1:8080";
  std::filesystem::path state_path;
  std::optional<crypto::SealingKey> master_key;
  std::filesystem::path static_dir;
};

// Parses a JSON config document. Relative paths resolve against base_dir.
// Throws server::ConfigError.
Settings parse_settings(std::string_view json_text, const std::filesystem::path& base_dir);

// Reads the config file (explicit path, else $TWOD_CONFIG, else defaults)
// and applies the TWOD_BIND_ADDR and TWOD_STATE_PATH overrides.
Settings load_settings(const std::optional<std::filesystem::path>& config_path);

}  // namespace twod::wire
