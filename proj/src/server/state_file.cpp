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

// State snapshot file:
//
//   2D2FA-STATE <version> <body bytes> <sha256 of body, hex>\n
//   <JSON body>
//
// The header makes truncation and bit rot detectable before the body is
// parsed. 2FA keys inside the body are AES-256-GCM sealed under the server
// master key with the username as associated data.

#include "twod/server/auth_server.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fcntl.h>
#include <unistd.h>

namespace twod::server {

namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "2D2FA-STATE";
constexpr int kVersion = 1;

std::string key_aad(std::string_view username) {
  return "2d2fa-user-key:" + std::string(username);
}

std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

json session_to_json(const AuthSession& s) {
  json j = {
      {"token", s.token},
      {"username", s.username},
      {"identifier", s.identifier.canonical()},
      {"issued_at", s.issued_at},
      {"status", to_string(s.status)},
      {"password_ok", s.password_ok},
      {"decoy", s.decoy},
      {"completed_at", nullptr},
      {"verified_slice", nullptr},
  };
  if (s.completed_at) j["completed_at"] = *s.completed_at;
  if (s.verified_slice) j["verified_slice"] = *s.verified_slice;
  return j;
}

AuthSession session_from_json(const json& j) {
  auto identifier = ids::Identifier::parse(j.at("identifier").get<std::string>());
  auto status = parse_status(j.at("status").get<std::string>());
  if (!identifier || !status) {
    throw StateError("snapshot: bad session record");
  }
  AuthSession s{
      .token = j.at("token").get<std::string>(),
      .username = j.at("username").get<std::string>(),
      .identifier = std::move(*identifier),
      .issued_at = j.at("issued_at").get<std::int64_t>(),
      .status = *status,
      .password_ok = j.at("password_ok").get<bool>(),
      .completed_at = std::nullopt,
      .verified_slice = std::nullopt,
      .decoy = j.at("decoy").get<bool>(),
  };
  if (!j.at("completed_at").is_null()) s.completed_at = j.at("completed_at").get<std::int64_t>();
  if (!j.at("verified_slice").is_null()) {
    s.verified_slice = j.at("verified_slice").get<std::uint64_t>();
  }
  if ((s.status == SessionStatus::active) == s.completed_at.has_value()) {
    throw StateError("snapshot: session completion does not match its status");
  }
  return s;
}

}  // namespace

std::string AuthServer::snapshot(const crypto::SealingKey& master_key) const {
  std::lock_guard lock(mutex_);
  json users = json::array();
  for (const auto& [name, u] : users_) {
    json entry = {
        {"username", u.username},
        {"password_hash", u.password_hash},
        {"kind", ids::to_string(u.identifier_kind)},
        {"enrolled", u.enrolled},
        {"sealed_key", nullptr},
    };
    if (u.totp_key) {
      entry["sealed_key"] =
          crypto::to_hex(crypto::seal(master_key, u.totp_key->bytes(), key_aad(u.username), *rng_));
    }
    users.push_back(std::move(entry));
  }
  json sessions = json::array();
  for (const auto& [token, s] : sessions_) sessions.push_back(session_to_json(s));

  const json body_json = {
      {"server_name", config_.server_name},
      {"generation", generation_},
      {"users", std::move(users)},
      {"sessions", std::move(sessions)},
  };
  const std::string body = body_json.dump();
  return std::string(kMagic) + " " + std::to_string(kVersion) + " " +
         std::to_string(body.size()) + " " + crypto::to_hex(crypto::sha256(as_bytes(body))) +
         "\n" + body;
}

void AuthServer::persist(const std::filesystem::path& path,
                         const crypto::SealingKey& master_key) const {
  const std::string data = snapshot(master_key);
  std::filesystem::path temp = path;
  temp += ".tmp";

  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) {
    throw std::system_error(errno, std::generic_category(), "open " + temp.string());
  }
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::system_error(err, std::generic_category(), "write " + temp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw std::system_error(errno, std::generic_category(), "sync " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

std::unique_ptr<AuthServer> AuthServer::restore(std::string_view snapshot,
                                                const crypto::SealingKey& master_key,
                                                ServerConfig config,
                                                std::shared_ptr<RandomSource> rng,
                                                ConfigCheck check) {
  const std::size_t eol = snapshot.find('\n');
  if (eol == std::string_view::npos) {
    throw StateError("snapshot: missing header");
  }
  std::istringstream header{std::string(snapshot.substr(0, eol))};
  std::string magic, digest;
  int version = 0;
  std::size_t length = 0;
  if (!(header >> magic >> version >> length >> digest) || magic != kMagic) {
    throw StateError("snapshot: bad header");
  }
  if (version != kVersion) {
    throw StateError("snapshot: unsupported version " + std::to_string(version));
  }
  const std::string_view body = snapshot.substr(eol + 1);
  if (body.size() != length) {
    throw StateError("snapshot: body is " + std::to_string(body.size()) + " bytes, expected " +
                     std::to_string(length));
  }
  if (crypto::to_hex(crypto::sha256(as_bytes(body))) != digest) {
    throw StateError("snapshot: checksum mismatch");
  }

  auto server = std::make_unique<AuthServer>(std::move(config), std::move(rng), check);
  try {
    const json j = json::parse(body);
    for (const auto& u : j.at("users")) {
      auto kind = ids::parse_kind(u.at("kind").get<std::string>());
      if (!kind) throw StateError("snapshot: bad identifier kind");
      UserRecord record{u.at("username").get<std::string>(),
                        u.at("password_hash").get<std::string>(), std::nullopt, *kind,
                        u.at("enrolled").get<bool>()};
      if (!u.at("sealed_key").is_null()) {
        auto sealed = crypto::from_hex(u.at("sealed_key").get<std::string>());
        if (!sealed) throw StateError("snapshot: bad sealed key encoding");
        auto raw = crypto::open(master_key, *sealed, key_aad(record.username));
        if (!raw || raw->size() != crypto::TotpKey::kSize) {
          throw StateError("snapshot: cannot unseal key for " + record.username +
                           " (wrong master key?)");
        }
        record.totp_key = crypto::TotpKey(*raw);
      }
      const std::string name = record.username;
      if (!server->users_.emplace(name, std::move(record)).second) {
        throw StateError("snapshot: duplicate user " + name);
      }
    }
    for (const auto& s : j.at("sessions")) {
      AuthSession session = session_from_json(s);
      const std::string token = session.token;
      if (!session.decoy && !server->users_.contains(session.username)) {
        throw StateError("snapshot: session for unknown user");
      }
      if (!server->sessions_.emplace(token, std::move(session)).second) {
        throw StateError("snapshot: duplicate session token");
      }
    }
    server->generation_ = j.at("generation").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw StateError(std::string("snapshot: malformed body: ") + e.what());
  }
  return server;
}

std::unique_ptr<AuthServer> AuthServer::restore_file(const std::filesystem::path& path,
                                                     const crypto::SealingKey& master_key,
                                                     ServerConfig config,
                                                     std::shared_ptr<RandomSource> rng,
                                                     ConfigCheck check) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StateError("cannot open state file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return restore(buffer.str(), master_key, std::move(config), std::move(rng), check);
}

}  // namespace twod::server
