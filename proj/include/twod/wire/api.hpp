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

// JSON wire protocol, version 1.
//
//   POST /api/register            {username, password, kind}
//   POST /api/login               {username, password}
//   POST /api/2fa/submit          {username, identifier, pin}      (device)
//   POST /api/2fa/manual          {session_token, pin8}            (client)
//   GET  /api/session/<token>/status
//
// Every response is an envelope {ok, data, error} with exactly one of data
// and error non-null, and carries the X-2D2FA-Version header. WireApi is
// transport-free so it can be driven in-process; HttpServer binds it to
// HTTP.

#pragma once

#include "twod/server/auth_server.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace twod::wire {

inline constexpr std::string_view kVersionHeader = "X-2D2FA-Version";
inline constexpr std::string_view kProtocolVersion = "1";

enum class WireError { duplicate_user, limit_reached, unknown_token, rejected, malformed };

// DUPLICATE_USER, LIMIT_REACHED, ...
std::string_view error_code(WireError error);

using Clock = std::function<std::int64_t()>;

struct HttpResponse {
  int status = 200;
  std::string body;
};

class WireApi {
 public:
  WireApi(server::AuthServer& server, Clock clock);

  // version_header is the request's X-2D2FA-Version value, if sent; any
  // value other than "1" is MALFORMED.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body,
                      std::optional<std::string_view> version_header = std::nullopt) const;

  server::AuthServer& server() const { return server_; }
  std::int64_t now() const { return clock_(); }

 private:
  HttpResponse register_user(std::string_view body) const;
  HttpResponse login(std::string_view body) const;
  HttpResponse submit(std::string_view body) const;
  HttpResponse manual(std::string_view body) const;
  HttpResponse status(std::string_view token) const;

  server::AuthServer& server_;
  Clock clock_;
};

}  // namespace twod::wire
