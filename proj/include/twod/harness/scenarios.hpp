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

// Bundled adversary and human-error scenarios.

#pragma once

#include "twod/harness/scenario.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

namespace twod::harness {

// Maps the identifier shown on the client to what the user enters on the
// device (canonical form).
using HumanChannel = std::function<std::string(const ids::Identifier& shown, RandomSource& rng)>;

HumanChannel perfect_copy();
// With probability p the drawn pattern has one segment replaced by a
// uniformly chosen valid alternative.
HumanChannel single_slip(double p);

struct ClientCompromiseOptions {
  std::size_t forged_attempts = 10'000;
  std::size_t fallback_guesses = 1'000;
};

struct ConcurrentAttackOptions {
  std::size_t repetitions = 1'000;
  std::size_t probe_repetitions = 100;
  // Logins raced on real threads at one frozen virtual instant.
  std::size_t race_repetitions = 50;
};

struct PinScrapingOptions {
  std::size_t sessions = 10;
};

struct SlipFarOptions {
  std::size_t trials = 100'000;
  double slip_probability = 0.1;
  // Replaces the default dictionary with {1234, 1235, 1236, 1238}, whose
  // entries are one slip apart, and lowers the per-user cap to 2.
  bool distance_one_dictionary = false;
};

Scenario scenario_client_compromise(const ClientCompromiseOptions& options = {});
Scenario scenario_concurrent_attack(const ConcurrentAttackOptions& options = {});
Scenario scenario_channel_replay();
Scenario scenario_pin_scraping(const PinScrapingOptions& options = {});
Scenario scenario_slip_far(const SlipFarOptions& options = {});

// Everything above with default options, in a fixed order.
std::vector<Scenario> bundled_scenarios();

// Deliberately broken servers. Each is expected to FAIL its scenario.
//   replay_short_cooldown: cooldown 30 s, shorter than the drift window.
//   replay_wide_window:    a verification window of 100 slices, standing in
//                          for an unbounded one.
//   slip_far_distance_one: dictionary entries one slip apart.
Scenario control_replay_short_cooldown();
Scenario control_replay_wide_window();
Scenario control_slip_far_distance_one(std::size_t trials = 10'000);
std::vector<Scenario> negative_controls();

// Bundled scenarios and controls by name.
std::optional<Scenario> find_scenario(std::string_view name);
std::vector<std::string> scenario_names();

}  // namespace twod::harness
