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

// Unlock patterns on the 3x3 grid, labelled row-major:
//
//     1 2 3
//     4 5 6
//     7 8 9
//
// A pattern is valid when its dots are distinct, it has 2..9 dots, and no
// move jumps over a dot that has not been visited yet.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twod::ids {

inline constexpr int kGridDots = 9;
inline constexpr std::size_t kMinPatternLength = 2;
inline constexpr std::size_t kMaxPatternLength = 9;

// A directed connecting line between two dots.
struct Segment {
  int from_dot = 0;
  int to_dot = 0;

  bool operator==(const Segment&) const = default;
};

bool is_valid_pattern(std::span<const int> dots);

class Pattern {
 public:
  // Throws std::invalid_argument if the dots do not form a valid pattern.
  explicit Pattern(std::vector<int> dots);

  // Parses a digit string such as "1236".
  static std::optional<Pattern> parse(std::string_view digits);

  const std::vector<int>& dots() const { return dots_; }
  std::size_t size() const { return dots_.size(); }
  std::vector<Segment> segments() const;
  std::string to_string() const;

  bool operator==(const Pattern&) const = default;
  auto operator<=>(const Pattern&) const = default;

 private:
  std::vector<int> dots_;
};

// All valid patterns of exactly `length` dots in lexicographic order.
// Throws std::invalid_argument outside [2, 9].
std::vector<Pattern> enumerate_patterns(std::size_t length);

// Levenshtein distance between the two segment sequences.
std::size_t similarity_distance(const Pattern& a, const Pattern& b);

// Valid patterns of the same length exactly one segment replacement away.
std::vector<Pattern> slip_variants(const Pattern& p);

}  // namespace twod::ids
