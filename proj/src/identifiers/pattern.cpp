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

#include "twod/pattern.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace twod::ids {

namespace {

// kSkip[a][b] is the dot a straight move from a to b passes over, or 0.
constexpr std::array<std::array<int, 10>, 10> make_skip_table() {
  std::array<std::array<int, 10>, 10> skip{};
  constexpr int kTriples[8][3] = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {1, 4, 7},
                                  {2, 5, 8}, {3, 6, 9}, {1, 5, 9}, {3, 5, 7}};
  for (const auto& t : kTriples) {
    skip[t[0]][t[2]] = t[1];
    skip[t[2]][t[0]] = t[1];
  }
  return skip;
}

constexpr auto kSkip = make_skip_table();

void extend(std::vector<int>& prefix, std::array<bool, 10>& used, std::size_t length,
            std::vector<Pattern>& out) {
  if (prefix.size() == length) {
    out.emplace_back(prefix);
    return;
  }
  for (int next = 1; next <= kGridDots; ++next) {
    if (used[next]) continue;
    if (!prefix.empty()) {
      const int over = kSkip[prefix.back()][next];
      if (over != 0 && !used[over]) continue;
    }
    used[next] = true;
    prefix.push_back(next);
    extend(prefix, used, length, out);
    prefix.pop_back();
    used[next] = false;
  }
}

}  // namespace

bool is_valid_pattern(std::span<const int> dots) {
  if (dots.size() < kMinPatternLength || dots.size() > kMaxPatternLength) {
    return false;
  }
  std::array<bool, 10> used{};
  for (std::size_t i = 0; i < dots.size(); ++i) {
    const int dot = dots[i];
    if (dot < 1 || dot > kGridDots || used[dot]) {
      return false;
    }
    if (i > 0) {
      const int over = kSkip[dots[i - 1]][dot];
      if (over != 0 && !used[over]) {
        return false;
      }
    }
    used[dot] = true;
  }
  return true;
}

Pattern::Pattern(std::vector<int> dots) : dots_(std::move(dots)) {
  if (!is_valid_pattern(dots_)) {
    throw std::invalid_argument("invalid unlock pattern");
  }
}

std::optional<Pattern> Pattern::parse(std::string_view digits) {
  if (digits.size() < kMinPatternLength || digits.size() > kMaxPatternLength) {
    return std::nullopt;
  }
  std::vector<int> dots;
  dots.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') {
      return std::nullopt;
    }
    dots.push_back(c - '0');
  }
  if (!is_valid_pattern(dots)) {
    return std::nullopt;
  }
  return Pattern(std::move(dots));
}

std::vector<Segment> Pattern::segments() const {
  std::vector<Segment> out;
  out.reserve(dots_.size() - 1);
  for (std::size_t i = 1; i < dots_.size(); ++i) {
    out.push_back({dots_[i - 1], dots_[i]});
  }
  return out;
}

std::string Pattern::to_string() const {
  std::string out;
  out.reserve(dots_.size());
  for (int d : dots_) {
    out.push_back(static_cast<char>('0' + d));
  }
  return out;
}

std::vector<Pattern> enumerate_patterns(std::size_t length) {
  if (length < kMinPatternLength || length > kMaxPatternLength) {
    throw std::invalid_argument("pattern length must be in [2, 9]");
  }
  std::vector<Pattern> out;
  std::vector<int> prefix;
  std::array<bool, 10> used{};
  extend(prefix, used, length, out);
  return out;
}

std::size_t similarity_distance(const Pattern& a, const Pattern& b) {
  const auto sa = a.segments();
  const auto sb = b.segments();
  // Single-row Levenshtein.
  std::vector<std::size_t> row(sb.size() + 1);
  for (std::size_t j = 0; j <= sb.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= sa.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= sb.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (sa[i - 1] == sb[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[sb.size()];
}

std::vector<Pattern> slip_variants(const Pattern& p) {
  const auto& dots = p.dots();
  std::vector<Pattern> out;

  if (dots.size() == 2) {
    for (auto& q : enumerate_patterns(2)) {
      if (q != p) out.push_back(std::move(q));
    }
    return out;
  }

  // With three or more dots every inner dot is shared by two segments, so a
  // single replaced segment can only move the first or the last dot.
  for (std::size_t position : {std::size_t{0}, dots.size() - 1}) {
    for (int dot = 1; dot <= kGridDots; ++dot) {
      if (dot == dots[position]) continue;
      std::vector<int> candidate = dots;
      candidate[position] = dot;
      if (is_valid_pattern(candidate)) {
        out.emplace_back(std::move(candidate));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twod::ids
