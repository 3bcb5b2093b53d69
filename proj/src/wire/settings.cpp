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

#include "twod/wire/settings.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace twod::wire {

namespace {

using nlohmann::json;
using server::ConfigError;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename T>
void read_if_present(const json& j, const char* name, T& out) {
  if (auto it = j.find(name); it != j.end()) out = it->get<T>();
}

}  // namespace

Settings parse_settings(std::string_view json_text, const std::filesystem::path& base_dir) {
  Settings settings;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    auto& cfg = settings.server;

    read_if_present(j, "server_name", cfg.server_name);
    read_if_present(j, "slice_window", cfg.slice_window);
    read_if_present(j, "session_timeout_s", cfg.session_timeout_s);
    read_if_present(j, "identifier_cooldown_s", cfg.identifier_cooldown_s);
    read_if_present(j, "max_concurrent_sessions_per_user", cfg.max_concurrent_sessions_per_user);
    read_if_present(j, "bind", settings.bind_addr);

    if (auto it = j.find("decoy_kind"); it != j.end()) {
      auto kind = ids::parse_kind(it->get<std::string>());
      if (!kind) throw ConfigError("decoy_kind must be pattern, qr or numeric");
      cfg.decoy_kind = *kind;
    }
    if (auto it = j.find("password_hash"); it != j.end()) {
      read_if_present(*it, "n", cfg.password_hash.n);
      read_if_present(*it, "r", cfg.password_hash.r);
      read_if_present(*it, "p", cfg.password_hash.p);
    }
    if (auto it = j.find("pattern_dictionary_file"); it != j.end()) {
      const auto text = read_file(resolve(base_dir, it->get<std::string>()));
      std::size_t min_distance = 2;
      read_if_present(j, "pattern_min_distance", min_distance);
      try {
        cfg.pattern_dictionary = ids::import_dictionary(text, min_distance);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pattern dictionary: ") + e.what());
      }
    } else {
      ids::DictionaryOptions options;
      if (auto it = j.find("pattern_dictionary"); it != j.end()) {
        read_if_present(*it, "length", options.length);
        read_if_present(*it, "start_dot", options.start_dot);
        read_if_present(*it, "min_distance", options.min_distance);
        read_if_present(*it, "max_size", options.max_size);
      }
      try {
        cfg.pattern_dictionary = ids::build_pattern_dictionary(options);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pattern dictionary: ") + e.what());
      }
    }
    if (auto it = j.find("state_path"); it != j.end()) {
      settings.state_path = resolve(base_dir, it->get<std::string>());
    }
    if (auto it = j.find("static_dir"); it != j.end()) {
      settings.static_dir = resolve(base_dir, it->get<std::string>());
    }
    if (auto it = j.find("master_key"); it != j.end()) {
      auto raw = crypto::from_hex(it->get<std::string>());
      if (!raw || raw->size() != 32) {
        throw ConfigError("master_key must be 64 lowercase hex characters");
      }
      crypto::SealingKey key{};
      std::copy(raw->begin(), raw->end(), key.begin());
      settings.master_key = key;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  settings.server.validate();
  return settings;
}

Settings load_settings(const std::optional<std::filesystem::path>& config_path) {
  std::optional<std::filesystem::path> path = config_path;
  if (!path) {
    if (const char* env = std::getenv("TWOD_CONFIG"); env && *env) path = env;
  }
  Settings settings;
  if (path) {
    settings = parse_settings(read_file(*path), path->parent_path());
  } else {
    settings.server.pattern_dictionary = ids::build_pattern_dictionary();
    settings.server.validate();
  }
  if (const char* env = std::getenv("TWOD_BIND_ADDR"); env && *env) settings.bind_addr = env;
  if (const char* env = std::getenv("TWOD_STATE_PATH"); env && *env) settings.state_path = env;
  return settings;
}

}  // namespace twod::wire
