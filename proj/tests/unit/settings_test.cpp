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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace {

using twod::server::ConfigError;
using twod::wire::parse_settings;

TEST(Settings, DefaultsFromEmptyObject) {
  const auto s = parse_settings("{}", "/base");
  EXPECT_EQ(s.bind_addr, "127.0.0.1:8080");
  EXPECT_EQ(s.server.slice_window, 2u);
  EXPECT_EQ(s.server.session_timeout_s, 30);
  EXPECT_EQ(s.server.identifier_cooldown_s, 120);
  EXPECT_EQ(s.server.max_concurrent_sessions_per_user, 5u);
  EXPECT_EQ(s.server.dictionary().size(), 31u);
  EXPECT_FALSE(s.master_key);
  EXPECT_TRUE(s.state_path.empty());
}

TEST(Settings, OverridesAndRelativePaths) {
  const auto s = parse_settings(
      R"({"server_name":"corp","bind":"0.0.0.0:9000","slice_window":1,"identifier_cooldown_s":60,
          "max_concurrent_sessions_per_user":3,"decoy_kind":"qr","state_path":"var/state.json",
          "static_dir":"web","master_key":")" + std::string(64, 'a') + R"(",
          "pattern_dictionary":{"max_size":12},"password_hash":{"n":1024,"r":4,"p":2}})",
      "/etc/twod");
  EXPECT_EQ(s.server.server_name, "corp");
  EXPECT_EQ(s.bind_addr, "0.0.0.0:9000");
  EXPECT_EQ(s.server.slice_window, 1u);
  EXPECT_EQ(s.server.decoy_kind, twod::ids::IdentifierKind::qr);
  EXPECT_EQ(s.state_path, std::filesystem::path("/etc/twod/var/state.json"));
  EXPECT_EQ(s.static_dir, std::filesystem::path("/etc/twod/web"));
  ASSERT_TRUE(s.master_key);
  EXPECT_EQ((*s.master_key)[0], 0xaa);
  EXPECT_EQ(s.server.dictionary().size(), 12u);
  EXPECT_EQ(s.server.password_hash.n, 1024u);
  EXPECT_EQ(s.server.password_hash.p, 2u);
}

TEST(Settings, RejectsUnsafeOrBrokenConfigs) {
  // Cooldown shorter than the drift window.
  EXPECT_THROW(parse_settings(R"({"identifier_cooldown_s":119})", "/"), ConfigError);
  // Dictionary smaller than twice the concurrency cap.
  EXPECT_THROW(parse_settings(R"({"pattern_dictionary":{"max_size":9}})", "/"), ConfigError);
  EXPECT_THROW(parse_settings(R"({"master_key":"abcd"})", "/"), ConfigError);
  EXPECT_THROW(parse_settings(R"({"decoy_kind":"emoji"})", "/"), ConfigError);
  EXPECT_THROW(parse_settings(R"({"session_timeout_s":"thirty"})", "/"), ConfigError);
  EXPECT_THROW(parse_settings("[]", "/"), ConfigError);
  EXPECT_THROW(parse_settings("{", "/"), ConfigError);
  EXPECT_THROW(parse_settings(R"({"pattern_dictionary":{"min_distance":0}})", "/"), ConfigError);
}

TEST(Settings, DictionaryFile) {
  const auto dir = std::filesystem::temp_directory_path() / "twod_settings_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "dict.txt") << "# custom\nPT:1234\nPT:1243\nPT:1253\nPT:1263\nPT:1274\n"
                                     "PT:1294\nPT:1423\nPT:1432\nPT:1452\nPT:1472\n";
  const auto s = parse_settings(R"({"pattern_dictionary_file":"dict.txt"})", dir);
  EXPECT_EQ(s.server.dictionary().size(), 10u);
  std::ofstream(dir / "close.txt") << "PT:1234\nPT:1236\n";
  EXPECT_THROW(parse_settings(R"({"pattern_dictionary_file":"close.txt"})", dir), ConfigError);
  EXPECT_THROW(parse_settings(R"({"pattern_dictionary_file":"missing.txt"})", dir), ConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
