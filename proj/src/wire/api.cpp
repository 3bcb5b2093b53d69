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

#include "twod/wire/api.hpp"

#include "json.hpp"

namespace twod::wire {

namespace {

using nlohmann::json;
using server::ErrorCode;
using server::ServerError;

constexpr std::string_view kSessionPrefix = "/api/session/";
constexpr std::string_view kStatusSuffix = "/status";

HttpResponse ok(json data) {
  return {200, json{{"ok", true}, {"data", std::move(data)}, {"error", nullptr}}.dump()};
}

HttpResponse fail(int status, WireError error, std::string_view message) {
  return {status, json{{"ok", false},
                       {"data", nullptr},
                       {"error", {{"code", error_code(error)}, {"message", message}}}}
                      .dump()};
}

HttpResponse malformed(std::string_view message) {
  return fail(400, WireError::malformed, message);
}

HttpResponse from_server_error(const ServerError& e) {
  switch (e.code()) {
    case ErrorCode::duplicate_user:
      return fail(409, WireError::duplicate_user, e.what());
    case ErrorCode::limit_reached:
      return fail(429, WireError::limit_reached, e.what());
    case ErrorCode::unknown_token:
      return fail(404, WireError::unknown_token, e.what());
    case ErrorCode::invalid_argument:
      return malformed(e.what());
    case ErrorCode::unknown_user:
    case ErrorCode::already_enrolled:
      break;
  }
  return fail(403, WireError::rejected, e.what());
}

// Parses a JSON object body and pulls the named string fields out of it.
std::optional<json> parse_object(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::optional<std::string> string_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

json identifier_json(const ids::Identifier& id) {
  json display;
  if (const auto* p = id.pattern()) {
    display = p->dots();
  } else {
    display = id.bare();
  }
  return {{"kind", ids::to_string(id.kind())}, {"display", display}, {"canonical", id.canonical()}};
}

std::string_view result_text(server::SubmitResult r) {
  return r == server::SubmitResult::accepted ? "accepted" : "rejected";
}

}  // namespace

std::string_view error_code(WireError error) {
  switch (error) {
    case WireError::duplicate_user:
      return "DUPLICATE_USER";
    case WireError::limit_reached:
      return "LIMIT_REACHED";
    case WireError::unknown_token:
      return "UNKNOWN_TOKEN";
    case WireError::rejected:
      return "REJECTED";
    case WireError::malformed:
      return "MALFORMED";
  }
  return "";
}

WireApi::WireApi(server::AuthServer& server, Clock clock)
    : server_(server), clock_(std::move(clock)) {}

HttpResponse WireApi::handle(std::string_view method, std::string_view path,
                             std::string_view body,
                             std::optional<std::string_view> version_header) const {
  if (version_header && *version_header != kProtocolVersion) {
    return malformed("unsupported protocol version");
  }
  try {
    if (method == "POST") {
      if (path == "/api/register") return register_user(body);
      if (path == "/api/login") return login(body);
      if (path == "/api/2fa/submit") return submit(body);
      if (path == "/api/2fa/manual") return manual(body);
    } else if (method == "GET" && path.starts_with(kSessionPrefix) &&
               path.ends_with(kStatusSuffix) &&
               path.size() > kSessionPrefix.size() + kStatusSuffix.size()) {
      return status(path.substr(kSessionPrefix.size(),
                                path.size() - kSessionPrefix.size() - kStatusSuffix.size()));
    }
    return fail(404, WireError::malformed, "no such endpoint");
  } catch (const ServerError& e) {
    return from_server_error(e);
  }
}

HttpResponse WireApi::register_user(std::string_view body) const {
  auto j = parse_object(body);
  if (!j) return malformed("body must be a JSON object");
  auto username = string_field(*j, "username");
  auto password = string_field(*j, "password");
  auto kind_text = string_field(*j, "kind");
  if (!username || !password || !kind_text) {
    return malformed("username, password and kind are required strings");
  }
  auto kind = ids::parse_kind(*kind_text);
  if (!kind) return malformed("kind must be pattern, qr or numeric");

  auto registration = server_.register_user(*username, *password, *kind);
  return ok({{"provisioning_payload", registration.payload.to_uri()}});
}

HttpResponse WireApi::login(std::string_view body) const {
  auto j = parse_object(body);
  if (!j) return malformed("body must be a JSON object");
  auto username = string_field(*j, "username");
  auto password = string_field(*j, "password");
  if (!username || !password) return malformed("username and password are required strings");

  auto ticket = server_.begin_login(*username, *password, now());
  return ok({{"session_token", ticket.session_token},
             {"identifier", identifier_json(ticket.identifier)},
             {"expires_in_s", ticket.expires_in_s}});
}

HttpResponse WireApi::submit(std::string_view body) const {
  auto j = parse_object(body);
  if (!j) return malformed("body must be a JSON object");
  auto username = string_field(*j, "username");
  auto identifier = string_field(*j, "identifier");
  auto pin_hex = string_field(*j, "pin");
  if (!username || !identifier || !pin_hex) {
    return malformed("username, identifier and pin are required strings");
  }
  auto pin = crypto::Pin::from_hex(*pin_hex);
  if (!pin) return malformed("pin must be 64 lowercase hex characters");

  const auto result = server_.submit_second_factor(*username, *identifier, pin->bytes(), now());
  return ok({{"result", result_text(result)}});
}

HttpResponse WireApi::manual(std::string_view body) const {
  auto j = parse_object(body);
  if (!j) return malformed("body must be a JSON object");
  auto token = string_field(*j, "session_token");
  auto digits = string_field(*j, "pin8");
  if (!token || !digits) return malformed("session_token and pin8 are required strings");
  if (digits->size() != crypto::kFallbackDigits ||
      digits->find_first_not_of("0123456789") != std::string::npos) {
    return malformed("pin8 must be exactly 8 digits");
  }
  const auto result = server_.submit_fallback_pin(*token, *digits, now());
  return ok({{"result", result_text(result)}});
}

HttpResponse WireApi::status(std::string_view token) const {
  return ok({{"status", server::to_string(server_.session_status(token, now()))}});
}

}  // namespace twod::wire
