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

#include "twod/random.hpp"

#include <openssl/rand.h>

#include <climits>
#include <cstring>
#include <stdexcept>

namespace twod {

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform: bound must be positive");
  }
  // Rejection sampling over the largest multiple of bound.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t value = 0;
    fill(std::span(reinterpret_cast<std::uint8_t*>(&value), sizeof(value)));
    if (value < limit) {
      return value % bound;
    }
  }
}

double RandomSource::unit() {
  return static_cast<double>(uniform(1ull << 53)) / static_cast<double>(1ull << 53);
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) {
    return;
  }
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::lock_guard lock(mutex_);
  std::size_t i = 0;
  while (i < out.size()) {
    const std::uint64_t word = engine_();
    const std::size_t n = std::min(out.size() - i, sizeof(word));
    std::memcpy(out.data() + i, &word, n);
    i += n;
  }
}

}  // namespace twod
