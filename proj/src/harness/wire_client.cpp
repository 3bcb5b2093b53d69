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

#include "twod/harness/wire_client.hpp"

#include "httplib.h"

namespace twod::harness {

namespace {

using nlohmann::json;

json parse_envelope(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return {{"ok", false}, {"data", nullptr}, {"error", {{"code", "BAD_RESPONSE"}, {"message", body}}}};
  }
  return j;
}

class InProcessClient final : public WireClient {
 public:
  explicit InProcessClient(const wire::WireApi& api) : api_(api) {}

  WireReply call(std::string_view method, std::string_view path, const json& body) override {
    const std::string text = body.is_null() ? std::string() : body.dump();
    const auto response = api_.handle(method, path, text, wire::kProtocolVersion);
    return {response.status, parse_envelope(response.body)};
  }

 private:
  const wire::WireApi& api_;
};

class HttpClient final : public WireClient {
 public:
  explicit HttpClient(std::string base_url) : base_url_(std::move(base_url)) {}

  WireReply call(std::string_view method, std::string_view path, const json& body) override {
    // httplib clients are not shareable across threads; one per call keeps
    // concurrent scenario clients independent.
    httplib::Client client(base_url_);
    const httplib::Headers headers = {
        {std::string(wire::kVersionHeader), std::string(wire::kProtocolVersion)}};
    const std::string target(path);
    httplib::Result res = method == "GET"
                              ? client.Get(target, headers)
                              : client.Post(target, headers, body.dump(), "application/json");
    if (!res) {
      return {0, {{"ok", false},
                  {"data", nullptr},
                  {"error", {{"code", "NETWORK"}, {"message", httplib::to_string(res.error())}}}}};
    }
    return {res->status, parse_envelope(res->body)};
  }

 private:
  std::string base_url_;
};

}  // namespace

std::string WireReply::error_code() const {
  if (ok()) return {};
  const auto it = envelope.find("error");
  if (it == envelope.end() || !it->is_object()) return "BAD_RESPONSE";
  return it->value("code", "BAD_RESPONSE");
}

std::unique_ptr<WireClient> make_in_process_client(const wire::WireApi& api) {
  return std::make_unique<InProcessClient>(api);
}

std::unique_ptr<WireClient> make_http_client(const std::string& base_url) {
  return std::make_unique<HttpClient>(base_url);
}

}  // namespace twod::harness
