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

// Independent routes to the pattern facts: validity from grid geometry
// instead of a skip table, enumeration by brute force over all ordered
// tuples, and edit distance by plain recursion instead of dynamic
// programming.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// Dot d sits at (row, col) = ((d-1)/3, (d-1)%3). A move a->b crosses a grid
// dot exactly when both coordinate deltas are even, and that dot is the
// midpoint.
inline bool geometric_valid(const std::vector<int>& dots) {
  if (dots.size() < 2 || dots.size() > 9) return false;
  std::vector<bool> seen(10, false);
  for (std::size_t i = 0; i < dots.size(); ++i) {
    const int d = dots[i];
    if (d < 1 || d > 9 || seen[d]) return false;
    if (i > 0) {
      const int a = dots[i - 1];
      const int ar = (a - 1) / 3, ac = (a - 1) % 3, br = (d - 1) / 3, bc = (d - 1) % 3;
      if ((ar - br) % 2 == 0 && (ac - bc) % 2 == 0) {
        const int mid = ((ar + br) / 2) * 3 + (ac + bc) / 2 + 1;
        if (!seen[mid]) return false;
      }
    }
    seen[d] = true;
  }
  return true;
}

// Every ordered tuple of distinct dots of the given length, filtered.
inline std::vector<std::vector<int>> brute_force_patterns(std::size_t length) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void()> rec = [&] {
    if (cur.size() == length) {
      if (geometric_valid(cur)) out.push_back(cur);
      return;
    }
    for (int d = 1; d <= 9; ++d) {
      if (std::find(cur.begin(), cur.end(), d) != cur.end()) continue;
      cur.push_back(d);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

using Seg = std::pair<int, int>;

inline std::vector<Seg> segments_of(const std::vector<int>& dots) {
  std::vector<Seg> out;
  for (std::size_t i = 1; i < dots.size(); ++i) out.emplace_back(dots[i - 1], dots[i]);
  return out;
}

// Textbook recursive definition; exponential but fine for 8 segments.
inline std::size_t edit_distance_recursive(const std::vector<Seg>& a, std::size_t i,
                                           const std::vector<Seg>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return edit_distance_recursive(a, i + 1, b, j + 1);
  return 1 + std::min({edit_distance_recursive(a, i + 1, b, j),
                       edit_distance_recursive(a, i, b, j + 1),
                       edit_distance_recursive(a, i + 1, b, j + 1)});
}

inline std::size_t edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  return edit_distance_recursive(segments_of(a), 0, segments_of(b), 0);
}

}  // namespace oracle
