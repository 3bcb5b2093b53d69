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

#include "twod/provisioning.hpp"

#include <map>

namespace twod {

namespace {

constexpr std::string_view kScheme = "2d2fa://enroll?";

bool unreserved(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~';
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : text) {
    if (unreserved(c)) {
      out.push_back(c);
    } else {
      const auto b = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0x0f]);
    }
  }
  return out;
}

std::optional<std::string> percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size()) {
      return std::nullopt;
    }
    const int hi = hex_nibble(text[i + 1]);
    const int lo = hex_nibble(text[i + 2]);
    if (hi < 0 || lo < 0) {
      return std::nullopt;
    }
    out.push_back(static_cast<char>((hi << 4) | lo));
    i += 2;
  }
  return out;
}

std::string ProvisioningPayload::to_uri() const {
  return std::string(kScheme) + "sn=" + percent_encode(server_name) +
         "&un=" + percent_encode(username) + "&key=" + key.to_hex() +
         "&kind=" + std::string(ids::to_string(kind));
}

std::optional<ProvisioningPayload> ProvisioningPayload::parse(std::string_view uri) {
  if (uri.substr(0, kScheme.size()) != kScheme) {
    return std::nullopt;
  }
  uri.remove_prefix(kScheme.size());

  std::map<std::string, std::string, std::less<>> fields;
  while (!uri.empty()) {
    const std::size_t amp = uri.find('&');
    const std::string_view pair = uri.substr(0, amp);
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos) {
      return std::nullopt;
    }
    auto value = percent_decode(pair.substr(eq + 1));
    if (!value || !fields.emplace(std::string(pair.substr(0, eq)), std::move(*value)).second) {
      return std::nullopt;
    }
    if (amp == std::string_view::npos) break;
    uri.remove_prefix(amp + 1);
  }
  if (fields.size() != 4) {
    return std::nullopt;
  }
  auto sn = fields.find("sn");
  auto un = fields.find("un");
  auto key_hex = fields.find("key");
  auto kind_text = fields.find("kind");
  if (sn == fields.end() || un == fields.end() || key_hex == fields.end() ||
      kind_text == fields.end() || sn->second.empty() || un->second.empty()) {
    return std::nullopt;
  }
  auto key = crypto::TotpKey::from_hex(key_hex->second);
  auto kind = ids::parse_kind(kind_text->second);
  if (!key || !kind) {
    return std::nullopt;
  }
  return ProvisioningPayload{sn->second, un->second, *key, *kind};
}

}  // namespace twod
