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

#include <atomic>
#include <cstdint>
#include <stdexcept>

namespace twod::harness {

// Injected time source. Only the harness driver moves it, and only forward,
// so every wire client sees one globally ordered timeline.
class VirtualClock {
 public:
  explicit VirtualClock(std::int64_t start) : now_(start) {}

  std::int64_t now() const { return now_.load(std::memory_order_acquire); }

  void set(std::int64_t t) {
    if (t < now()) throw std::logic_error("virtual time cannot run backwards");
    now_.store(t, std::memory_order_release);
  }

  void advance(std::int64_t seconds) { set(now() + seconds); }

 private:
  std::atomic<std::int64_t> now_;
};

}  // namespace twod::harness
