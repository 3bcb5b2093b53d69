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

// The device side: stores enrolled accounts, turns what the user typed or
// drew into a canonical identifier, computes the PIN and posts it straight
// to the server. The device never sees a session token.

#pragma once

#include "twod/agent/enrollment_store.hpp"

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twod::agent {

enum class AgentErrorCode {
  unknown_account,
  invalid_identifier,
  malformed_payload,
  duplicate_enrollment,
  network,
  server_error,
};

class AgentError : public std::runtime_error {
 public:
  AgentError(AgentErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  AgentErrorCode code() const { return code_; }

 private:
  AgentErrorCode code_;
};

struct SubmitRequest {
  std::string username;
  std::string identifier;
  std::string pin_hex;
};

enum class SubmitOutcome { accepted, rejected };

// Device-to-server channel.
class Transport {
 public:
  virtual ~Transport() = default;
  // Throws AgentError{network} when the server cannot be reached and
  // AgentError{server_error} for an error envelope.
  virtual SubmitOutcome submit(const std::string& server_url, const SubmitRequest& request) = 0;
};

// POSTs to <server_url>/api/2fa/submit.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::chrono::milliseconds timeout = std::chrono::seconds(5))
      : timeout_(timeout) {}

  SubmitOutcome submit(const std::string& server_url, const SubmitRequest& request) override;

 private:
  std::chrono::milliseconds timeout_;
};

struct Approval {
  std::string identifier;
  SubmitOutcome outcome;
};

struct OfflineCode {
  std::string identifier;
  std::string digits;
};

class Agent {
 public:
  // Keeps its own copy of the store handle; the transport must outlive it.
  Agent(EnrollmentStore store, Transport& transport)
      : store_(std::move(store)), transport_(transport) {}

  // Does not contact the server; the first login is the confirmation round.
  Account enroll(std::string_view provisioning_payload, const std::string& server_url);

  // Validates the input locally (no network call on failure), then submits.
  Approval approve(std::string_view account, std::string_view identifier_input,
                   std::int64_t now);

  // Fallback when the server is unreachable: the 8-digit code to type on
  // the client.
  OfflineCode approve_offline(std::string_view account, std::string_view identifier_input,
                              std::int64_t now) const;

  std::vector<std::string> list() const;
  void remove(std::string_view account);

 private:
  Account find(std::string_view label) const;

  EnrollmentStore store_;
  Transport& transport_;
};

}  // namespace twod::agent
