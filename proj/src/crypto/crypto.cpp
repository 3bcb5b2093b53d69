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

#include "twod/crypto.hpp"

#include "twod/random.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>

namespace twod::crypto {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool identifier_encodable(std::string_view id) {
  return !id.empty() && id.find(kMessageSeparator) == std::string_view::npos;
}

std::uint64_t window_start(TimeSlice now, std::uint32_t window) {
  return now.index >= window ? now.index - window : 0;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return std::nullopt;
  }
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      return std::nullopt;
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    return false;
  }
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

TotpKey::TotpKey(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSize) {
    throw std::invalid_argument("TotpKey: expected 16 bytes");
  }
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

TotpKey::~TotpKey() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

TotpKey TotpKey::generate(RandomSource& rng) {
  std::array<std::uint8_t, kSize> raw{};
  rng.fill(raw);
  TotpKey key(raw);
  OPENSSL_cleanse(raw.data(), raw.size());
  return key;
}

std::optional<TotpKey> TotpKey::from_hex(std::string_view hex) {
  auto raw = crypto::from_hex(hex);
  if (!raw || raw->size() != kSize) {
    return std::nullopt;
  }
  TotpKey key(*raw);
  OPENSSL_cleanse(raw->data(), raw->size());
  return key;
}

std::string TotpKey::to_hex() const { return crypto::to_hex(bytes_); }

bool TotpKey::operator==(const TotpKey& other) const {
  return constant_time_equal(bytes_, other.bytes_);
}

std::optional<Pin> Pin::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) {
    return std::nullopt;
  }
  auto raw = crypto::from_hex(hex);
  if (!raw) {
    return std::nullopt;
  }
  std::array<std::uint8_t, kSize> bytes{};
  std::copy(raw->begin(), raw->end(), bytes.begin());
  return Pin(bytes);
}

std::string Pin::to_hex() const { return crypto::to_hex(bytes_); }

TimeSlice derive_time_slice(std::int64_t unix_seconds) {
  if (unix_seconds < 0) {
    throw std::invalid_argument("derive_time_slice: negative unix time");
  }
  return TimeSlice{static_cast<std::uint64_t>(unix_seconds / kSliceSeconds)};
}

std::string pin_message(std::string_view identifier_canonical, TimeSlice slice) {
  if (!identifier_encodable(identifier_canonical)) {
    throw MalformedIdentifier("identifier must be non-empty and must not contain '|'");
  }
  std::string message;
  message.reserve(identifier_canonical.size() + 21);
  message.append(identifier_canonical);
  message.push_back(kMessageSeparator);
  message.append(std::to_string(slice.index));
  return message;
}

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return out;
}

Pin generate_pin(const TotpKey& key, std::string_view identifier_canonical, TimeSlice slice) {
  const std::string message = pin_message(identifier_canonical, slice);
  return Pin(hmac_sha256(key.bytes(),
                         std::span(reinterpret_cast<const std::uint8_t*>(message.data()),
                                   message.size())));
}

std::string truncate_pin(const Pin& pin) {
  const auto mac = pin.bytes();
  const std::size_t offset = mac[Pin::kSize - 1] & 0x0f;
  const std::uint32_t word = (static_cast<std::uint32_t>(mac[offset] & 0x7f) << 24) |
                             (static_cast<std::uint32_t>(mac[offset + 1]) << 16) |
                             (static_cast<std::uint32_t>(mac[offset + 2]) << 8) |
                             static_cast<std::uint32_t>(mac[offset + 3]);
  std::string digits = std::to_string(word % 100000000u);
  digits.insert(0, kFallbackDigits - digits.size(), '0');
  return digits;
}

std::optional<TimeSlice> match_pin(const TotpKey& key, std::string_view identifier_canonical,
                                   std::span<const std::uint8_t> candidate, TimeSlice now_slice,
                                   std::uint32_t window) {
  if (candidate.size() != Pin::kSize || !identifier_encodable(identifier_canonical)) {
    return std::nullopt;
  }
  // Every slice in the window is computed so timing does not reveal which
  // one matched.
  std::optional<TimeSlice> matched;
  for (std::uint64_t s = window_start(now_slice, window); s <= now_slice.index + window; ++s) {
    const Pin expected = generate_pin(key, identifier_canonical, TimeSlice{s});
    if (constant_time_equal(expected.bytes(), candidate) && !matched) {
      matched = TimeSlice{s};
    }
  }
  return matched;
}

bool verify_pin(const TotpKey& key, std::string_view identifier_canonical,
                std::span<const std::uint8_t> candidate, TimeSlice now_slice,
                std::uint32_t window) {
  return match_pin(key, identifier_canonical, candidate, now_slice, window).has_value();
}

std::optional<TimeSlice> match_truncated_pin(const TotpKey& key,
                                             std::string_view identifier_canonical,
                                             std::string_view digits, TimeSlice now_slice,
                                             std::uint32_t window) {
  if (digits.size() != kFallbackDigits ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      !identifier_encodable(identifier_canonical)) {
    return std::nullopt;
  }
  const auto typed = std::span(reinterpret_cast<const std::uint8_t*>(digits.data()), digits.size());
  std::optional<TimeSlice> matched;
  for (std::uint64_t s = window_start(now_slice, window); s <= now_slice.index + window; ++s) {
    const std::string expected =
        truncate_pin(generate_pin(key, identifier_canonical, TimeSlice{s}));
    const auto expected_bytes =
        std::span(reinterpret_cast<const std::uint8_t*>(expected.data()), expected.size());
    if (constant_time_equal(expected_bytes, typed) && !matched) {
      matched = TimeSlice{s};
    }
  }
  return matched;
}

}  // namespace twod::crypto
