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

// Identifier-bound one-time PINs.
//
// A PIN is HMAC-SHA256 under the shared 128-bit key over the message
//
//     utf8(identifier) '|' decimal(slice)
//
// where slice = floor(unix_seconds / 30). Identifiers never contain '|', so
// the encoding is injective. The full 32-byte MAC is the online PIN; the
// offline fallback shows an 8-digit dynamic truncation of the same MAC.
//
// Nothing here reads a clock: time always arrives as a parameter.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twod {
class RandomSource;
}

namespace twod::crypto {

inline constexpr std::int64_t kSliceSeconds = 30;
inline constexpr std::uint32_t kDefaultWindow = 2;
inline constexpr std::size_t kFallbackDigits = 8;
inline constexpr char kMessageSeparator = '|';

// Thrown for identifier strings that cannot be encoded into a PIN message.
class MalformedIdentifier : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The 128-bit shared secret. Deliberately has no stream operator; the only
// textual form is to_hex(), used for provisioning and sealed storage.
class TotpKey {
 public:
  static constexpr std::size_t kSize = 16;

  // Throws std::invalid_argument unless bytes.size() == kSize.
  explicit TotpKey(std::span<const std::uint8_t> bytes);
  TotpKey(const TotpKey&) = default;
  TotpKey& operator=(const TotpKey&) = default;
  ~TotpKey();

  static TotpKey generate(RandomSource& rng);
  static std::optional<TotpKey> from_hex(std::string_view hex);

  std::string to_hex() const;
  std::span<const std::uint8_t, kSize> bytes() const { return bytes_; }

  // Constant-time.
  bool operator==(const TotpKey& other) const;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

struct TimeSlice {
  std::uint64_t index = 0;

  auto operator<=>(const TimeSlice&) const = default;
};

class Pin {
 public:
  static constexpr std::size_t kSize = 32;

  explicit Pin(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  // Accepts exactly 64 lowercase hex characters.
  static std::optional<Pin> from_hex(std::string_view hex);

  std::string to_hex() const;
  std::span<const std::uint8_t, kSize> bytes() const { return bytes_; }

  bool operator==(const Pin& other) const = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

// Throws std::invalid_argument for negative input.
TimeSlice derive_time_slice(std::int64_t unix_seconds);

// Bytes fed to the MAC. Throws MalformedIdentifier for empty identifiers or
// identifiers containing the separator.
std::string pin_message(std::string_view identifier_canonical, TimeSlice slice);

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message);

Pin generate_pin(const TotpKey& key, std::string_view identifier_canonical, TimeSlice slice);

// RFC 4226 dynamic truncation applied to the 32-byte MAC, 8 digits.
std::string truncate_pin(const Pin& pin);

// True iff candidate is the PIN for some slice in
// [now - window, now + window], clamped at slice 0. Never throws; a
// malformed identifier or a candidate of the wrong length is simply false.
bool verify_pin(const TotpKey& key, std::string_view identifier_canonical,
                std::span<const std::uint8_t> candidate, TimeSlice now_slice,
                std::uint32_t window = kDefaultWindow);

// Same as verify_pin, but reports which slice matched.
std::optional<TimeSlice> match_pin(const TotpKey& key, std::string_view identifier_canonical,
                                   std::span<const std::uint8_t> candidate, TimeSlice now_slice,
                                   std::uint32_t window = kDefaultWindow);

// Fallback path: candidate is the 8-digit string a user typed.
std::optional<TimeSlice> match_truncated_pin(const TotpKey& key,
                                             std::string_view identifier_canonical,
                                             std::string_view digits, TimeSlice now_slice,
                                             std::uint32_t window = kDefaultWindow);

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

std::string to_hex(std::span<const std::uint8_t> bytes);
// Lowercase hex only; nullopt on odd length or any other character.
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view hex);

}  // namespace twod::crypto
