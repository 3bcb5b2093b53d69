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

// The authentication server state machine.
//
// Holds the `users` table (salted password hash, 2FA key, identifier kind)
// and the `active_sessions` table. A login always yields an identifier, even
// for a wrong password or an unknown username; the password verdict is kept
// on the session and only acted upon when the device submits a PIN.
//
// Session lifecycle:
//
//   active --(valid PIN and password)--> succeeded
//   active --(any other submission)----> failed
//   active --(session_timeout_s)-------> timed_out
//
// Terminal sessions keep their identifier out of the user's pool for
// identifier_cooldown_s, after which the row is dropped and the identifier
// can be issued again.
//
// Every operation takes `now` in unix seconds; the server never reads a
// clock. All public operations are serialized by one mutex.

#pragma once

#include "twod/crypto.hpp"
#include "twod/identifier.hpp"
#include "twod/provisioning.hpp"
#include "twod/random.hpp"
#include "twod/secrets.hpp"
#include "twod/server/config.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twod::server {

enum class ErrorCode {
  duplicate_user,
  unknown_user,
  already_enrolled,
  limit_reached,
  unknown_token,
  invalid_argument,
};

class ServerError : public std::runtime_error {
 public:
  ServerError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when a state snapshot cannot be restored.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SessionStatus { active, succeeded, failed, timed_out };
enum class SubmitResult { accepted, rejected };

std::string_view to_string(SessionStatus status);
std::optional<SessionStatus> parse_status(std::string_view text);

struct UserRecord {
  std::string username;
  std::string password_hash;
  // Present from registration until a failed confirmation round.
  std::optional<crypto::TotpKey> totp_key;
  ids::IdentifierKind identifier_kind = ids::IdentifierKind::pattern;
  bool enrolled = false;
};

struct AuthSession {
  std::string token;
  std::string username;
  ids::Identifier identifier;
  std::int64_t issued_at = 0;
  SessionStatus status = SessionStatus::active;
  bool password_ok = false;
  std::optional<std::int64_t> completed_at;
  // Slice the accepted PIN matched; set only on success.
  std::optional<std::uint64_t> verified_slice;
  // Session for an unknown username; can never succeed.
  bool decoy = false;
};

struct Registration {
  crypto::TotpKey totp_key;
  ProvisioningPayload payload;
};

struct LoginTicket {
  std::string session_token;
  ids::Identifier identifier;
  std::int64_t expires_in_s = 0;
};

class AuthServer {
 public:
  enum class ConfigCheck { enforce, skip };

  // ConfigCheck::skip exists for negative-control experiments only.
  AuthServer(ServerConfig config, std::shared_ptr<RandomSource> rng,
             ConfigCheck check = ConfigCheck::enforce);

  AuthServer(const AuthServer&) = delete;
  AuthServer& operator=(const AuthServer&) = delete;

  const ServerConfig& config() const { return config_; }

  // Throws ServerError{duplicate_user} if the username holds a live key,
  // {invalid_argument} for empty or oversized credentials. A username whose
  // confirmation round failed may register again.
  Registration register_user(const std::string& username, std::string_view password,
                             ids::IdentifierKind kind);

  // Settles the confirmation round: the first completed session of a user
  // that is not yet enrolled. Success enrolls the user; failure or timeout
  // discards the key. Returns whether the user is now enrolled; false also
  // while the round is still pending. The server settles rounds on its own
  // as sessions complete, so callers mostly see the already_enrolled error.
  bool confirm_registration(std::string_view username, std::int64_t now);

  // Throws ServerError{limit_reached} when the user already has
  // max_concurrent_sessions_per_user active sessions or no identifier is
  // available.
  LoginTicket begin_login(std::string_view username, std::string_view password,
                          std::int64_t now);

  SubmitResult submit_second_factor(std::string_view username,
                                    std::string_view identifier_canonical,
                                    std::span<const std::uint8_t> pin, std::int64_t now);

  // Manual fallback: the 8-digit truncated PIN typed on the client. Throws
  // ServerError{unknown_token}, or {invalid_argument} for non-8-digit input.
  SubmitResult submit_fallback_pin(std::string_view session_token, std::string_view digits,
                                   std::int64_t now);

  std::size_t expire_sessions(std::int64_t now);
  std::size_t release_identifiers(std::int64_t now);
  // Both sweeps.
  void tick(std::int64_t now);

  // Sweeps first, so a session past its timeout reads timed_out. Throws
  // ServerError{unknown_token}, also for rows released after cooldown.
  SessionStatus session_status(std::string_view session_token, std::int64_t now);

  std::optional<UserRecord> find_user(std::string_view username) const;
  std::vector<AuthSession> sessions() const;

  // Empty when every state invariant holds; otherwise one line per
  // violation.
  std::vector<std::string> check_invariants(std::int64_t now) const;

  // Bumped by every state change.
  std::uint64_t generation() const;

  // Versioned snapshot; 2FA keys are sealed under master_key.
  std::string snapshot(const crypto::SealingKey& master_key) const;
  // Atomic write (temp file + rename).
  void persist(const std::filesystem::path& path, const crypto::SealingKey& master_key) const;

  // Throws StateError for any corrupt, truncated or foreign snapshot; there
  // is no partial restore.
  static std::unique_ptr<AuthServer> restore(std::string_view snapshot,
                                             const crypto::SealingKey& master_key,
                                             ServerConfig config,
                                             std::shared_ptr<RandomSource> rng,
                                             ConfigCheck check = ConfigCheck::enforce);
  static std::unique_ptr<AuthServer> restore_file(const std::filesystem::path& path,
                                                  const crypto::SealingKey& master_key,
                                                  ServerConfig config,
                                                  std::shared_ptr<RandomSource> rng,
                                                  ConfigCheck check = ConfigCheck::enforce);

 private:
  using SessionTable = std::map<std::string, AuthSession, std::less<>>;

  std::size_t expire_locked(std::int64_t now);
  std::size_t release_locked(std::int64_t now);
  void complete_locked(AuthSession& session, SessionStatus status, std::int64_t now);
  void settle_confirmation_locked(const AuthSession& session);
  ids::Identifier allocate_identifier_locked(std::string_view username, ids::IdentifierKind kind);
  std::string new_token_locked();
  void touch_locked() { ++generation_; }

  ServerConfig config_;
  std::shared_ptr<RandomSource> rng_;
  std::string decoy_password_hash_;

  mutable std::mutex mutex_;
  std::map<std::string, UserRecord, std::less<>> users_;
  SessionTable sessions_;
  std::uint64_t generation_ = 0;
};

}  // namespace twod::server
