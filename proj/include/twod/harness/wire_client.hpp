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

#include "twod/wire/api.hpp"

#include "json.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace twod::harness {

struct WireReply {
  int status = 0;
  nlohmann::json envelope;

  bool ok() const { return envelope.value("ok", false); }
  const nlohmann::json& data() const { return envelope.at("data"); }
  // Empty on success.
  std::string error_code() const;
};

// One wire client. Implementations must be safe to call from several
// threads at once.
class WireClient {
 public:
  virtual ~WireClient() = default;
  virtual WireReply call(std::string_view method, std::string_view path,
                         const nlohmann::json& body) = 0;
};

// Calls the dispatcher directly; no sockets.
std::unique_ptr<WireClient> make_in_process_client(const wire::WireApi& api);

// Talks HTTP to a running server, e.g. "http://127.0.0.1:8080".
std::unique_ptr<WireClient> make_http_client(const std::string& base_url);

}  // namespace twod::harness
