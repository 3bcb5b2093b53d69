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

#include "twod/crypto.hpp"
#include "twod/identifier.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace twod {

// One-time enrollment string handed from the server to the device:
//
//   2d2fa://enroll?sn=<server>&un=<user>&key=<32 hex>&kind=<kind>
//
// sn and un are percent-encoded.
struct ProvisioningPayload {
  std::string server_name;
  std::string username;
  crypto::TotpKey key;
  ids::IdentifierKind kind;

  std::string to_uri() const;
  static std::optional<ProvisioningPayload> parse(std::string_view uri);
};

std::string percent_encode(std::string_view text);
std::optional<std::string> percent_decode(std::string_view text);

}  // namespace twod
