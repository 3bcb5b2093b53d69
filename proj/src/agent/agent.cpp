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

#include "twod/agent/agent.hpp"

#include "twod/provisioning.hpp"

#include <algorithm>

namespace twod::agent {

namespace {

ids::Identifier parse_input(const Account& account, std::string_view input) {
  if (auto id = ids::Identifier::from_input(account.kind, input)) return *id;
  // Canonical text ("PT:1236") is accepted too.
  if (auto id = ids::Identifier::parse(input); id && id->kind() == account.kind) return *id;
  throw AgentError(AgentErrorCode::invalid_identifier,
                   "'" + std::string(input) + "' is not a valid " +
                       std::string(ids::to_string(account.kind)) + " identifier");
}

}  // namespace

Account Agent::enroll(std::string_view provisioning_payload, const std::string& server_url) {
  auto payload = ProvisioningPayload::parse(provisioning_payload);
  if (!payload) {
    throw AgentError(AgentErrorCode::malformed_payload, "malformed provisioning payload");
  }
  Account account{payload->server_name, payload->username, payload->key, payload->kind,
                  server_url};
  store_.update([&](std::vector<Account>& accounts) {
    const bool exists = std::any_of(accounts.begin(), accounts.end(), [&](const Account& a) {
      return a.label() == account.label();
    });
    if (exists) {
      throw AgentError(AgentErrorCode::duplicate_enrollment,
                       account.label() + " is already enrolled");
    }
    accounts.push_back(account);
  });
  return account;
}

Approval Agent::approve(std::string_view account_label, std::string_view identifier_input,
                        std::int64_t now) {
  const Account account = find(account_label);
  const ids::Identifier id = parse_input(account, identifier_input);
  const std::string canonical = id.canonical();
  const crypto::Pin pin =
      crypto::generate_pin(account.key, canonical, crypto::derive_time_slice(now));
  const auto outcome =
      transport_.submit(account.server_url, SubmitRequest{account.username, canonical, pin.to_hex()});
  return Approval{canonical, outcome};
}

OfflineCode Agent::approve_offline(std::string_view account_label,
                                   std::string_view identifier_input, std::int64_t now) const {
  const Account account = find(account_label);
  const ids::Identifier id = parse_input(account, identifier_input);
  const std::string canonical = id.canonical();
  const crypto::Pin pin =
      crypto::generate_pin(account.key, canonical, crypto::derive_time_slice(now));
  return OfflineCode{canonical, crypto::truncate_pin(pin)};
}

std::vector<std::string> Agent::list() const {
  std::vector<std::string> labels;
  for (const auto& a : store_.load()) labels.push_back(a.label());
  std::sort(labels.begin(), labels.end());
  return labels;
}

void Agent::remove(std::string_view account_label) {
  store_.update([&](std::vector<Account>& accounts) {
    const auto removed = std::erase_if(
        accounts, [&](const Account& a) { return a.label() == account_label; });
    if (removed == 0) {
      throw AgentError(AgentErrorCode::unknown_account,
                       "no enrolled account " + std::string(account_label));
    }
  });
}

Account Agent::find(std::string_view label) const {
  for (auto& a : store_.load()) {
    if (a.label() == label) return a;
  }
  throw AgentError(AgentErrorCode::unknown_account, "no enrolled account " + std::string(label));
}

}  // namespace twod::agent
