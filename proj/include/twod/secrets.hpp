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

// Secret-handling helpers shared by the server state file and the device
// enrollment store: salted scrypt password hashes, scrypt key derivation and
// AES-256-GCM sealing.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twod {
class RandomSource;
}

namespace twod::crypto {

struct ScryptParams {
  std::uint64_t n = 1u << 14;
  std::uint32_t r = 8;
  std::uint32_t p = 1;
};

using SealingKey = std::array<std::uint8_t, 32>;

// Encoded as "scrypt$<n>$<r>$<p>$<salt hex>$<hash hex>".
std::string hash_password(std::string_view password, const ScryptParams& params,
                          RandomSource& rng);

// False for mismatches and for malformed encodings.
bool verify_password(std::string_view password, std::string_view encoded);

SealingKey derive_key(std::string_view passphrase, std::span<const std::uint8_t> salt,
                      const ScryptParams& params);

// Output layout: 12-byte nonce, ciphertext, 16-byte tag. The associated data
// is authenticated but not stored.
std::vector<std::uint8_t> seal(const SealingKey& key, std::span<const std::uint8_t> plaintext,
                               std::string_view associated_data, RandomSource& rng);

// nullopt if the tag does not verify or the input is too short.
std::optional<std::vector<std::uint8_t>> open(const SealingKey& key,
                                              std::span<const std::uint8_t> sealed,
                                              std::string_view associated_data);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

}  // namespace twod::crypto
