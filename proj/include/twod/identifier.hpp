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

#include "twod/pattern.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twod {
class RandomSource;
}

namespace twod::ids {

enum class IdentifierKind { pattern, qr, numeric };

inline constexpr std::size_t kQrTokenLength = 12;
inline constexpr std::size_t kNumericLength = 4;

std::string_view to_string(IdentifierKind kind);
std::optional<IdentifierKind> parse_kind(std::string_view text);

// The per-session value shown on the client and typed, drawn or scanned on
// the device. Canonical forms: "PT:1236", "QR:<12 alnum>", "NUM:0427".
class Identifier {
 public:
  static Identifier from_pattern(Pattern pattern);
  // Throw std::invalid_argument on payloads that break the format contract.
  static Identifier qr(std::string token);
  static Identifier numeric(std::string digits);

  static std::optional<Identifier> parse(std::string_view canonical);

  // Device-side input in its bare form: "1236", a QR token, "0427".
  static std::optional<Identifier> from_input(IdentifierKind kind, std::string_view input);

  IdentifierKind kind() const { return kind_; }
  std::string canonical() const;
  // Payload without the kind prefix.
  std::string bare() const;
  const Pattern* pattern() const { return std::get_if<Pattern>(&payload_); }

  bool operator==(const Identifier&) const = default;

 private:
  Identifier(IdentifierKind kind, std::variant<Pattern, std::string> payload)
      : kind_(kind), payload_(std::move(payload)) {}

  IdentifierKind kind_;
  std::variant<Pattern, std::string> payload_;
};

// Fresh random QR or numeric identifier. Uniqueness is the server pool's job.
// Throws std::invalid_argument for the pattern kind.
Identifier generate_token_identifier(IdentifierKind kind, RandomSource& rng);

struct DictionaryOptions {
  std::size_t length = 4;
  int start_dot = 1;
  std::size_t min_distance = 2;
  std::size_t max_size = 1024;
};

class IdentifierDictionary {
 public:
  IdentifierDictionary(IdentifierKind kind, std::vector<Identifier> entries,
                       std::size_t min_distance);

  IdentifierKind kind() const { return kind_; }
  const std::vector<Identifier>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t min_distance() const { return min_distance_; }

 private:
  IdentifierKind kind_;
  std::vector<Identifier> entries_;
  std::size_t min_distance_;
};

// Greedy lexicographic selection: walk the valid patterns of the given length
// that start at start_dot and admit each one whose distance to every admitted
// entry is at least min_distance, until max_size entries. Deterministic.
IdentifierDictionary build_pattern_dictionary(const DictionaryOptions& options = {});

// One canonical identifier per line, LF-terminated. import_dictionary skips
// lines starting with '#'.
std::string export_dictionary(const IdentifierDictionary& dictionary);

// Parses an exported dictionary and re-checks the pattern distance
// invariant. Throws std::invalid_argument on bad lines, mixed kinds,
// duplicates or entries closer than min_distance.
IdentifierDictionary import_dictionary(std::string_view text, std::size_t min_distance);

}  // namespace twod::ids
