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

#include "twod/secrets.hpp"

#include "twod/crypto.hpp"
#include "twod/random.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <charconv>
#include <memory>
#include <stdexcept>

namespace twod::crypto {

namespace {

constexpr std::size_t kSaltSize = 16;
constexpr std::size_t kHashSize = 32;
constexpr std::size_t kNonceSize = 12;
constexpr std::size_t kTagSize = 16;
constexpr std::uint64_t kScryptMaxMem = 1ull << 30;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

const unsigned char* as_uchar(std::string_view s) {
  return reinterpret_cast<const unsigned char*>(s.data());
}

void scrypt(std::string_view secret, std::span<const std::uint8_t> salt,
            const ScryptParams& params, std::span<std::uint8_t> out) {
  if (EVP_PBE_scrypt(secret.data(), secret.size(), salt.data(), salt.size(), params.n, params.r,
                     params.p, kScryptMaxMem, out.data(), out.size()) != 1) {
    throw std::invalid_argument("scrypt: unsupported parameters");
  }
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string hash_password(std::string_view password, const ScryptParams& params,
                          RandomSource& rng) {
  std::array<std::uint8_t, kSaltSize> salt{};
  rng.fill(salt);
  std::array<std::uint8_t, kHashSize> hash{};
  scrypt(password, salt, params, hash);
  return "scrypt$" + std::to_string(params.n) + "$" + std::to_string(params.r) + "$" +
         std::to_string(params.p) + "$" + to_hex(salt) + "$" + to_hex(hash);
}

bool verify_password(std::string_view password, std::string_view encoded) {
  const auto parts = split(encoded, '$');
  if (parts.size() != 6 || parts[0] != "scrypt") {
    return false;
  }
  ScryptParams params;
  if (!parse_number(parts[1], params.n) || !parse_number(parts[2], params.r) ||
      !parse_number(parts[3], params.p)) {
    return false;
  }
  const auto salt = from_hex(parts[4]);
  const auto expected = from_hex(parts[5]);
  if (!salt || !expected || expected->size() != kHashSize) {
    return false;
  }
  std::array<std::uint8_t, kHashSize> actual{};
  try {
    scrypt(password, *salt, params, actual);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return constant_time_equal(actual, *expected);
}

SealingKey derive_key(std::string_view passphrase, std::span<const std::uint8_t> salt,
                      const ScryptParams& params) {
  SealingKey key{};
  scrypt(passphrase, salt, params, key);
  return key;
}

std::vector<std::uint8_t> seal(const SealingKey& key, std::span<const std::uint8_t> plaintext,
                               std::string_view associated_data, RandomSource& rng) {
  std::vector<std::uint8_t> out(kNonceSize + plaintext.size() + kTagSize);
  rng.fill(std::span(out.data(), kNonceSize));

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, as_uchar(associated_data),
                        static_cast<int>(associated_data.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kNonceSize, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceSize + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize,
                          out.data() + kNonceSize + plaintext.size()) != 1) {
    throw std::runtime_error("AES-GCM seal failed");
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> open(const SealingKey& key,
                                              std::span<const std::uint8_t> sealed,
                                              std::string_view associated_data) {
  if (sealed.size() < kNonceSize + kTagSize) {
    return std::nullopt;
  }
  const std::size_t body = sealed.size() - kNonceSize - kTagSize;
  std::vector<std::uint8_t> plaintext(body);
  std::array<std::uint8_t, kTagSize> tag{};
  std::copy(sealed.end() - kTagSize, sealed.end(), tag.begin());

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, as_uchar(associated_data),
                        static_cast<int>(associated_data.size())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, sealed.data() + kNonceSize,
                        static_cast<int>(body)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) != 1) {
    return std::nullopt;
  }
  if (EVP_DecryptFinal_ex(ctx.get(), plaintext.data() + len, &len) != 1) {
    OPENSSL_cleanse(plaintext.data(), plaintext.size());
    return std::nullopt;
  }
  return plaintext;
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  return out;
}

}  // namespace twod::crypto
