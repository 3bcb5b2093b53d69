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

#include "twod/server/auth_server.hpp"

#include <algorithm>
#include <set>

namespace twod::server {

namespace {

constexpr std::size_t kMaxUsernameBytes = 64;
constexpr std::size_t kMaxPasswordBytes = 1024;
constexpr std::size_t kTokenBytes = 16;
constexpr int kTokenDrawAttempts = 64;

void require_time(std::int64_t now) {
  if (now < 0) {
    throw ServerError(ErrorCode::invalid_argument, "time must be non-negative");
  }
}

void require_credentials(std::string_view username, std::string_view password) {
  if (username.empty() || username.size() > kMaxUsernameBytes) {
    throw ServerError(ErrorCode::invalid_argument, "username must be 1..64 bytes");
  }
  if (std::any_of(username.begin(), username.end(),
                  [](char c) { return static_cast<unsigned char>(c) < 0x20 || c == 0x7f; })) {
    throw ServerError(ErrorCode::invalid_argument, "username contains control characters");
  }
  if (password.empty() || password.size() > kMaxPasswordBytes) {
    throw ServerError(ErrorCode::invalid_argument, "password must be 1..1024 bytes");
  }
}

bool is_terminal(SessionStatus status) { return status != SessionStatus::active; }

}  // namespace

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::active:
      return "active";
    case SessionStatus::succeeded:
      return "succeeded";
    case SessionStatus::failed:
      return "failed";
    case SessionStatus::timed_out:
      return "timed_out";
  }
  return "";
}

std::optional<SessionStatus> parse_status(std::string_view text) {
  for (auto s : {SessionStatus::active, SessionStatus::succeeded, SessionStatus::failed,
                 SessionStatus::timed_out}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

AuthServer::AuthServer(ServerConfig config, std::shared_ptr<RandomSource> rng, ConfigCheck check)
    : config_(std::move(config)), rng_(std::move(rng)) {
  if (!rng_) {
    throw ConfigError("a randomness source is required");
  }
  if (!config_.pattern_dictionary) {
    config_.pattern_dictionary = ids::build_pattern_dictionary();
  }
  if (check == ConfigCheck::enforce) {
    config_.validate();
  }
  // Unknown usernames are checked against this hash so a login costs the
  // same whether or not the account exists.
  decoy_password_hash_ = crypto::hash_password("decoy", config_.password_hash, *rng_);
}

Registration AuthServer::register_user(const std::string& username, std::string_view password,
                                       ids::IdentifierKind kind) {
  require_credentials(username, password);
  // Hashing is slow; do it before taking the lock.
  std::string hash = crypto::hash_password(password, config_.password_hash, *rng_);
  crypto::TotpKey key = crypto::TotpKey::generate(*rng_);

  std::lock_guard lock(mutex_);
  auto it = users_.find(username);
  if (it != users_.end() && it->second.totp_key) {
    throw ServerError(ErrorCode::duplicate_user, "username is already registered");
  }
  UserRecord record{username, std::move(hash), key, kind, false};
  if (it == users_.end()) {
    users_.emplace(username, std::move(record));
  } else {
    it->second = std::move(record);
  }
  touch_locked();
  return Registration{key, ProvisioningPayload{config_.server_name, username, key, kind}};
}

bool AuthServer::confirm_registration(std::string_view username, std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  expire_locked(now);
  auto it = users_.find(username);
  if (it == users_.end()) {
    throw ServerError(ErrorCode::unknown_user, "unknown user");
  }
  if (it->second.enrolled) {
    throw ServerError(ErrorCode::already_enrolled, "user is already enrolled");
  }
  // Rounds settle as sessions complete; anything still here is pending or
  // was declined.
  return false;
}

LoginTicket AuthServer::begin_login(std::string_view username, std::string_view password,
                                    std::int64_t now) {
  require_time(now);
  require_credentials(username, password);

  std::string stored_hash;
  bool known = false;
  {
    std::lock_guard lock(mutex_);
    if (auto it = users_.find(username); it != users_.end()) {
      stored_hash = it->second.password_hash;
      known = true;
    }
  }
  const bool password_ok =
      crypto::verify_password(password, known ? stored_hash : decoy_password_hash_) && known;

  std::lock_guard lock(mutex_);
  expire_locked(now);
  release_locked(now);

  auto user = users_.find(username);
  const bool decoy = user == users_.end();
  const auto kind = decoy ? config_.decoy_kind : user->second.identifier_kind;

  const auto active = std::count_if(sessions_.begin(), sessions_.end(), [&](const auto& entry) {
    return entry.second.username == username && entry.second.status == SessionStatus::active;
  });
  if (static_cast<std::size_t>(active) >= config_.max_concurrent_sessions_per_user) {
    throw ServerError(ErrorCode::limit_reached, "too many concurrent sessions");
  }

  ids::Identifier identifier = allocate_identifier_locked(username, kind);
  std::string token = new_token_locked();
  AuthSession session{
      .token = token,
      .username = std::string(username),
      .identifier = identifier,
      .issued_at = now,
      .status = SessionStatus::active,
      .password_ok = password_ok && !decoy,
      .completed_at = std::nullopt,
      .verified_slice = std::nullopt,
      .decoy = decoy,
  };
  sessions_.emplace(token, std::move(session));
  touch_locked();
  return LoginTicket{std::move(token), std::move(identifier), config_.session_timeout_s};
}

SubmitResult AuthServer::submit_second_factor(std::string_view username,
                                              std::string_view identifier_canonical,
                                              std::span<const std::uint8_t> pin,
                                              std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  expire_locked(now);

  auto match = std::find_if(sessions_.begin(), sessions_.end(), [&](const auto& entry) {
    const AuthSession& s = entry.second;
    return s.status == SessionStatus::active && s.username == username &&
           s.identifier.canonical() == identifier_canonical;
  });
  if (match == sessions_.end()) {
    return SubmitResult::rejected;
  }
  AuthSession& session = match->second;

  std::optional<crypto::TimeSlice> matched;
  auto user = users_.find(username);
  if (!session.decoy && user != users_.end() && user->second.totp_key) {
    matched = crypto::match_pin(*user->second.totp_key, identifier_canonical, pin,
                                crypto::derive_time_slice(now), config_.slice_window);
  }
  if (matched && session.password_ok) {
    session.verified_slice = matched->index;
    complete_locked(session, SessionStatus::succeeded, now);
    return SubmitResult::accepted;
  }
  complete_locked(session, SessionStatus::failed, now);
  return SubmitResult::rejected;
}

SubmitResult AuthServer::submit_fallback_pin(std::string_view session_token,
                                             std::string_view digits, std::int64_t now) {
  require_time(now);
  if (digits.size() != crypto::kFallbackDigits ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ServerError(ErrorCode::invalid_argument, "fallback PIN must be 8 digits");
  }
  std::lock_guard lock(mutex_);
  expire_locked(now);

  auto it = sessions_.find(session_token);
  if (it == sessions_.end()) {
    throw ServerError(ErrorCode::unknown_token, "unknown session token");
  }
  AuthSession& session = it->second;
  if (session.status != SessionStatus::active) {
    return SubmitResult::rejected;
  }

  std::optional<crypto::TimeSlice> matched;
  auto user = users_.find(session.username);
  if (!session.decoy && user != users_.end() && user->second.totp_key) {
    matched = crypto::match_truncated_pin(*user->second.totp_key, session.identifier.canonical(),
                                          digits, crypto::derive_time_slice(now),
                                          config_.slice_window);
  }
  if (matched && session.password_ok) {
    session.verified_slice = matched->index;
    complete_locked(session, SessionStatus::succeeded, now);
    return SubmitResult::accepted;
  }
  complete_locked(session, SessionStatus::failed, now);
  return SubmitResult::rejected;
}

std::size_t AuthServer::expire_sessions(std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  return expire_locked(now);
}

std::size_t AuthServer::release_identifiers(std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  return release_locked(now);
}

void AuthServer::tick(std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  expire_locked(now);
  release_locked(now);
}

SessionStatus AuthServer::session_status(std::string_view session_token, std::int64_t now) {
  require_time(now);
  std::lock_guard lock(mutex_);
  expire_locked(now);
  release_locked(now);
  auto it = sessions_.find(session_token);
  if (it == sessions_.end()) {
    throw ServerError(ErrorCode::unknown_token, "unknown session token");
  }
  return it->second.status;
}

std::optional<UserRecord> AuthServer::find_user(std::string_view username) const {
  std::lock_guard lock(mutex_);
  auto it = users_.find(username);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::vector<AuthSession> AuthServer::sessions() const {
  std::lock_guard lock(mutex_);
  std::vector<AuthSession> out;
  out.reserve(sessions_.size());
  for (const auto& [token, session] : sessions_) out.push_back(session);
  return out;
}

std::uint64_t AuthServer::generation() const {
  std::lock_guard lock(mutex_);
  return generation_;
}

std::vector<std::string> AuthServer::check_invariants(std::int64_t now) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> violations;
  std::map<std::string, std::size_t> active_per_user;
  std::set<std::pair<std::string, std::string>> held;

  for (const auto& [token, s] : sessions_) {
    const std::string where = "session " + token.substr(0, 8) + " (" + s.username + ")";
    if (s.status == SessionStatus::active) {
      ++active_per_user[s.username];
      if (s.completed_at) violations.push_back(where + ": active with completed_at");
    } else if (!s.completed_at) {
      violations.push_back(where + ": terminal without completed_at");
    }
    const bool cooling = s.completed_at && *s.completed_at + config_.identifier_cooldown_s > now;
    if (s.status == SessionStatus::active || cooling) {
      if (!held.emplace(s.username, s.identifier.canonical()).second) {
        violations.push_back(where + ": identifier " + s.identifier.canonical() +
                             " held twice");
      }
    }
    if (s.status == SessionStatus::succeeded) {
      if (s.decoy) violations.push_back(where + ": decoy session succeeded");
      if (!s.password_ok) violations.push_back(where + ": succeeded without password");
      if (!s.verified_slice) {
        violations.push_back(where + ": succeeded without a verified PIN");
      } else if (s.completed_at) {
        const auto done = crypto::derive_time_slice(*s.completed_at).index;
        const auto lo = done >= config_.slice_window ? done - config_.slice_window : 0;
        if (*s.verified_slice < lo || *s.verified_slice > done + config_.slice_window) {
          violations.push_back(where + ": verified PIN slice outside the window");
        }
      }
    }
  }
  for (const auto& [user, count] : active_per_user) {
    if (count > config_.max_concurrent_sessions_per_user) {
      violations.push_back("user " + user + ": " + std::to_string(count) + " active sessions");
    }
  }
  for (const auto& [name, record] : users_) {
    if (record.enrolled && !record.totp_key) {
      violations.push_back("user " + name + ": enrolled without a key");
    }
  }
  return violations;
}

std::size_t AuthServer::expire_locked(std::int64_t now) {
  std::size_t count = 0;
  for (auto& [token, session] : sessions_) {
    if (session.status == SessionStatus::active &&
        session.issued_at + config_.session_timeout_s <= now) {
      complete_locked(session, SessionStatus::timed_out, now);
      ++count;
    }
  }
  return count;
}

std::size_t AuthServer::release_locked(std::int64_t now) {
  const auto released = std::erase_if(sessions_, [&](const auto& entry) {
    const AuthSession& s = entry.second;
    return is_terminal(s.status) && s.completed_at &&
           *s.completed_at + config_.identifier_cooldown_s <= now;
  });
  if (released > 0) touch_locked();
  return released;
}

void AuthServer::complete_locked(AuthSession& session, SessionStatus status, std::int64_t now) {
  session.status = status;
  session.completed_at = now;
  settle_confirmation_locked(session);
  touch_locked();
}

void AuthServer::settle_confirmation_locked(const AuthSession& session) {
  if (session.decoy) return;
  auto it = users_.find(session.username);
  if (it == users_.end() || it->second.enrolled || !it->second.totp_key) return;
  if (session.status == SessionStatus::succeeded) {
    it->second.enrolled = true;
  } else {
    // Declined round: the key is discarded and the user registers again.
    it->second.totp_key.reset();
  }
}

ids::Identifier AuthServer::allocate_identifier_locked(std::string_view username,
                                                       ids::IdentifierKind kind) {
  std::set<std::string, std::less<>> held;
  for (const auto& [token, s] : sessions_) {
    if (s.username == username) held.insert(s.identifier.canonical());
  }

  if (kind == ids::IdentifierKind::pattern) {
    std::vector<const ids::Identifier*> available;
    for (const auto& entry : config_.dictionary().entries()) {
      if (!held.contains(entry.canonical())) available.push_back(&entry);
    }
    if (available.empty()) {
      throw ServerError(ErrorCode::limit_reached, "no identifier available");
    }
    return *available[rng_->uniform(available.size())];
  }

  for (int attempt = 0; attempt < kTokenDrawAttempts; ++attempt) {
    ids::Identifier candidate = ids::generate_token_identifier(kind, *rng_);
    if (!held.contains(candidate.canonical())) return candidate;
  }
  throw ServerError(ErrorCode::limit_reached, "no identifier available");
}

std::string AuthServer::new_token_locked() {
  for (;;) {
    std::array<std::uint8_t, kTokenBytes> raw{};
    rng_->fill(raw);
    std::string token = crypto::to_hex(raw);
    if (!sessions_.contains(token)) return token;
  }
}

}  // namespace twod::server
