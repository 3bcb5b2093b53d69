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

#include "pattern_oracle.hpp"
#include "twod/harness/scenario.hpp"
#include "twod/harness/scenarios.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace twod::harness;

bool has_failed_assertion(const ScenarioReport& r, const std::string& fragment) {
  for (const auto& a : r.assertions) {
    if (!a.passed && a.name.find(fragment) != std::string::npos) return true;
  }
  return false;
}

std::string failures(const ScenarioReport& r) {
  std::string out;
  for (const auto& a : r.assertions) {
    if (!a.passed) out += a.name + ": " + a.detail + "\n";
  }
  return out;
}

TEST(VirtualClock, MovesForwardOnly) {
  VirtualClock clock(100);
  EXPECT_EQ(clock.now(), 100);
  clock.advance(5);
  EXPECT_EQ(clock.now(), 105);
  clock.set(105);
  EXPECT_THROW(clock.set(104), std::logic_error);
  EXPECT_EQ(clock.now(), 105);
}

TEST(Schedule, RunsInTimeOrderWithStableTies) {
  Scenario s{"schedule", "", harness_config(), twod::server::AuthServer::ConfigCheck::enforce,
             [](ScenarioContext& ctx) {
               std::vector<std::string> seen;
               const auto t0 = ctx.now();
               ctx.at(t0 + 20, "c", [&] { seen.push_back("c@" + std::to_string(ctx.now() - t0)); });
               ctx.at(t0 + 10, "a", [&] { seen.push_back("a@" + std::to_string(ctx.now() - t0)); });
               ctx.at(t0 + 10, "b", [&] { seen.push_back("b@" + std::to_string(ctx.now() - t0)); });
               ctx.run_schedule();
               ctx.check("order", seen == std::vector<std::string>{"a@10", "b@10", "c@20"});
             }};
  const auto r = run_scenario(s);
  EXPECT_TRUE(r.passed()) << failures(r);
}

TEST(Scenario, ExceptionsBecomeFailedAssertions) {
  Scenario s{"boom", "", harness_config(), twod::server::AuthServer::ConfigCheck::enforce,
             [](ScenarioContext&) { throw std::runtime_error("kaput"); }};
  const auto r = run_scenario(s);
  EXPECT_FALSE(r.passed());
  EXPECT_GE(r.failed_count(), 1u);
}

TEST(HumanChannel, PerfectCopyAndSlips) {
  twod::SeededRandom rng(8);
  const auto shown = *twod::ids::Identifier::parse("PT:1236");
  EXPECT_EQ(perfect_copy()(shown, rng), "PT:1236");
  EXPECT_EQ(single_slip(0.0)(shown, rng), "PT:1236");
  const auto slip = single_slip(1.0);
  for (int i = 0; i < 200; ++i) {
    const auto got = twod::ids::Identifier::parse(slip(shown, rng));
    ASSERT_TRUE(got);
    EXPECT_EQ(oracle::edit_distance({1, 2, 3, 6}, got->pattern()->dots()), 1u);
  }
}

TEST(Scenarios, SameSeedSameReport) {
  const auto s = scenario_concurrent_attack({.repetitions = 40, .probe_repetitions = 10, .race_repetitions = 5});
  const auto a = run_scenario(s, {.seed = 11});
  const auto b = run_scenario(s, {.seed = 11});
  EXPECT_TRUE(a.passed()) << failures(a);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  const auto slip = scenario_slip_far({.trials = 300});
  EXPECT_EQ(run_scenario(slip, {.seed = 4}).to_json().dump(),
            run_scenario(slip, {.seed = 4}).to_json().dump());
}

TEST(Scenarios, ReportJsonShape) {
  const auto r = run_scenario(scenario_channel_replay(), {.seed = 2});
  const auto j = r.to_json();
  EXPECT_EQ(j["scenario"], "channel_replay");
  EXPECT_EQ(j["seed"], 2);
  ASSERT_TRUE(j["assertions"].is_array());
  for (const auto& a : j["assertions"]) {
    EXPECT_TRUE(a["verdict"] == "pass" || a["verdict"] == "fail");
  }
  EXPECT_TRUE(j.contains("metrics"));
  EXPECT_TRUE(j.contains("trace"));
}

TEST(Scenarios, ScaledDownBundleHolds) {
  const std::vector<Scenario> quick = {
      scenario_client_compromise({.forged_attempts = 200, .fallback_guesses = 50}),
      scenario_concurrent_attack({.repetitions = 60, .probe_repetitions = 10, .race_repetitions = 5}),
      scenario_channel_replay(),
      scenario_pin_scraping({.sessions = 6}),
      scenario_slip_far({.trials = 2'000}),
  };
  for (const auto& s : quick) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto r = run_scenario(s, {.seed = seed});
      EXPECT_TRUE(r.passed()) << s.name << " seed " << seed << "\n" << failures(r);
      EXPECT_EQ(r.failed_count(), 0u);
    }
  }
}

TEST(Scenarios, NamesAreUniqueAndFindable) {
  const auto names = scenario_names();
  std::set<std::string> unique(names.begin(), names.end());
  EXPECT_EQ(unique.size(), names.size());
  for (const auto& n : names) EXPECT_TRUE(find_scenario(n)) << n;
  EXPECT_FALSE(find_scenario("nope"));
  EXPECT_EQ(bundled_scenarios().size(), 5u);
}

TEST(NegativeControls, ShortCooldownAdmitsReplay) {
  const auto r = run_scenario(control_replay_short_cooldown());
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(has_failed_assertion(r, "replay")) << failures(r);
}

TEST(NegativeControls, WideWindowTripsTheAudit) {
  const auto r = run_scenario(control_replay_wide_window());
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(has_failed_assertion(r, "window-valid PIN")) << failures(r);
}

TEST(NegativeControls, DistanceOneDictionaryHasFalseAccepts) {
  const auto r = run_scenario(control_slip_far_distance_one(3'000));
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.metrics.at("false_accepts"), 0.0);
}

TEST(Transport, HttpMatchesInProcess) {
  const auto s = scenario_pin_scraping({.sessions = 5});
  const auto in = run_scenario(s, {.seed = 3, .transport = Transport::in_process});
  const auto http = run_scenario(s, {.seed = 3, .transport = Transport::http});
  EXPECT_TRUE(http.passed()) << failures(http);
  EXPECT_EQ(in.assertions.size(), http.assertions.size());
  EXPECT_EQ(in.metrics, http.metrics);
}

}  // namespace
