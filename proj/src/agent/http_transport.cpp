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

#include "httplib.h"
#include "json.hpp"

namespace twod::agent {

SubmitOutcome HttpTransport::submit(const std::string& server_url, const SubmitRequest& request) {
  httplib::Client client(server_url);
  if (!client.is_valid()) {
    throw AgentError(AgentErrorCode::network, "invalid server URL " + server_url);
  }
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  client.set_connection_timeout(seconds);
  client.set_read_timeout(seconds);

  const nlohmann::json body = {
      {"username", request.username}, {"identifier", request.identifier}, {"pin", request.pin_hex}};
  auto res = client.Post("/api/2fa/submit", {{"X-2D2FA-Version", "1"}}, body.dump(),
                         "application/json");
  if (!res) {
    throw AgentError(AgentErrorCode::network,
                     "cannot reach " + server_url + ": " + httplib::to_string(res.error()));
  }
  const auto envelope = nlohmann::json::parse(res->body, nullptr, false);
  if (envelope.is_discarded() || !envelope.is_object()) {
    throw AgentError(AgentErrorCode::server_error, "server sent a non-JSON response");
  }
  if (!envelope.value("ok", false)) {
    std::string message = "server error";
    if (envelope.contains("error") && envelope["error"].is_object()) {
      message = envelope["error"].value("code", "") + ": " + envelope["error"].value("message", "");
    }
    throw AgentError(AgentErrorCode::server_error, message);
  }
  const auto& data = envelope.at("data");
  return data.value("result", "") == "accepted" ? SubmitOutcome::accepted : SubmitOutcome::rejected;
}

}  // namespace twod::agent
