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

// twod-harness: runs the bundled adversary scenarios against an in-process
// (or loopback HTTP) server with an injected clock.

#include "twod/harness/scenarios.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"2D-2FA attack harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run scenarios and report per-assertion verdicts");
  std::string scenario_name;
  std::uint64_t seed = 1;
  std::string report_path;
  std::string transport = "inproc";
  run->add_option("--scenario", scenario_name, "Scenario or negative control (default: all bundled)");
  run->add_option("--seed", seed, "Randomness seed");
  run->add_option("--report", report_path, "Write a JSON report here");
  run->add_option("--transport", transport, "inproc or http")
      ->check(CLI::IsMember({"inproc", "http"}));

  app.add_subcommand("list", "List scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (app.got_subcommand("list")) {
    for (const auto& name : twod::harness::scenario_names()) std::cout << name << '\n';
    return 0;
  }

  std::vector<twod::harness::Scenario> scenarios;
  if (scenario_name.empty()) {
    scenarios = twod::harness::bundled_scenarios();
  } else if (auto s = twod::harness::find_scenario(scenario_name)) {
    scenarios.push_back(std::move(*s));
  } else {
    std::cerr << "unknown scenario '" << scenario_name << "'; try 'twod-harness list'\n";
    return 2;
  }

  const twod::harness::RunOptions options{
      .seed = seed,
      .transport = transport == "http" ? twod::harness::Transport::http
                                       : twod::harness::Transport::in_process};
  nlohmann::json reports = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& scenario : scenarios) {
    const auto report = twod::harness::run_scenario(scenario, options);
    all_passed = all_passed && report.passed();
    std::cout << (report.passed() ? "PASS " : "FAIL ") << report.scenario << '\n';
    for (const auto& a : report.assertions) {
      std::cout << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.name;
      if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
      std::cout << '\n';
    }
    for (const auto& n : report.notes) std::cout << "  note: " << n << '\n';
    reports.push_back(report.to_json());
  }

  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << nlohmann::json{{"seed", seed}, {"passed", all_passed}, {"scenarios", reports}}.dump(2)
        << '\n';
    if (!out) {
      std::cerr << "cannot write " << report_path << '\n';
      return 2;
    }
  }
  return all_passed ? 0 : 1;
}
