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

#include "twod/harness/scenarios.hpp"

#include <cmath>
#include <latch>
#include <thread>

namespace twod::harness {

namespace {

using ids::IdentifierKind;

constexpr const char* kPassword = "correct horse battery";
constexpr const char* kBobPassword = "tr0ub4dor&3";

std::string random_pin_hex(RandomSource& rng) {
  std::array<std::uint8_t, crypto::Pin::kSize> raw{};
  rng.fill(raw);
  return crypto::to_hex(raw);
}

std::string random_digits(RandomSource& rng) {
  std::string digits;
  for (std::size_t i = 0; i < crypto::kFallbackDigits; ++i) {
    digits.push_back(static_cast<char>('0' + rng.uniform(10)));
  }
  return digits;
}

// Lets every active session of the user expire and every identifier cool
// down, so the next phase starts from a full pool.
void settle(ScenarioContext& ctx) {
  ctx.clock().advance(ctx.config().session_timeout_s + ctx.config().identifier_cooldown_s + 1);
}

// Logs in repeatedly, failing each session that does not carry `target`,
// until the target is issued or the pool runs dry. Failed sessions keep
// their identifiers cooling down, so the pool shrinks toward the target.
std::optional<LoginResult> reacquire(ScenarioContext& ctx, const std::string& actor,
                                     const std::string& username, const std::string& password,
                                     const std::string& target, std::size_t& logins) {
  const std::string zero_pin(2 * crypto::Pin::kSize, '0');
  for (;;) {
    auto ticket = ctx.login(actor, username, password);
    if (!ticket.ok()) return std::nullopt;
    ++logins;
    if (ticket.identifier == target) return ticket;
    ctx.submit(actor, username, ticket.identifier, zero_pin);
  }
}

std::string fmt_count(std::size_t got, std::size_t of) {
  return std::to_string(got) + "/" + std::to_string(of);
}

}  // namespace

HumanChannel perfect_copy() {
  return [](const ids::Identifier& shown, RandomSource&) { return shown.canonical(); };
}

HumanChannel single_slip(double p) {
  return [p](const ids::Identifier& shown, RandomSource& rng) {
    const auto* pattern = shown.pattern();
    if (pattern == nullptr || rng.unit() >= p) return shown.canonical();
    const auto variants = ids::slip_variants(*pattern);
    if (variants.empty()) return shown.canonical();
    return ids::Identifier::from_pattern(variants[rng.uniform(variants.size())]).canonical();
  };
}

Scenario scenario_client_compromise(const ClientCompromiseOptions& options) {
  Scenario s;
  s.name = "client_compromise";
  s.description =
      "Attacker holds the password but not the key and forges PINs over many slices";
  s.config = harness_config();
  s.body = [options](ScenarioContext& ctx) {
    const auto alice = ctx.enroll("alice", kPassword);
    settle(ctx);
    const std::size_t cap = ctx.config().max_concurrent_sessions_per_user;

    // Concurrency cap: the user logs in first, the attacker fills the rest.
    const auto user = ctx.login("alice", "alice", kPassword);
    std::size_t attacker_sessions = 0;
    for (std::size_t i = 1; i < cap; ++i) {
      if (ctx.login("attacker", "alice", kPassword).ok()) ++attacker_sessions;
    }
    const auto over = ctx.login("attacker", "alice", kPassword);
    ctx.check("attacker filling the concurrency cap gets LIMIT_REACHED",
              user.ok() && attacker_sessions == cap - 1 && over.error == "LIMIT_REACHED",
              over.error);
    ctx.clock().advance(3);
    const auto before_cap = ctx.approve("alice", alice, user.identifier);
    ctx.check("user session opened before the cap still succeeds",
              before_cap == "accepted" && ctx.status(user.token) == "succeeded", before_cap);
    settle(ctx);

    // Forged PINs. Per 31 s step the attacker makes five attempts and the
    // user logs in once, which keeps the pool from running dry.
    constexpr std::size_t kAttackerPerStep = 5;
    std::size_t forged = 0, attacker_wins = 0, user_rounds = 0, user_wins = 0;
    std::size_t pool_denials = 0;
    std::size_t step = 0;
    while (forged < options.forged_attempts) {
      ctx.set_trace_enabled(step < 4);
      const std::int64_t base = ctx.now();
      for (std::size_t i = 0; i < kAttackerPerStep && forged < options.forged_attempts; ++i) {
        ctx.clock().set(base + static_cast<std::int64_t>(i));
        const auto ticket = ctx.login("attacker", "alice", kPassword);
        if (!ticket.ok()) {
          ++pool_denials;
          continue;
        }
        std::string pin;
        switch (forged % 3) {
          case 0:
            pin = random_pin_hex(ctx.rng());
            break;
          case 1: {
            // A well-formed PIN under a guessed key.
            const auto guess = crypto::TotpKey::generate(ctx.rng());
            pin = Device{"alice", guess}.pin_for(ticket.identifier, ctx.now()).to_hex();
            break;
          }
          default:
            pin = std::string(2 * crypto::Pin::kSize, '0');
            break;
        }
        ++forged;
        if (ctx.submit("attacker", "alice", ticket.identifier, pin) == "accepted") ++attacker_wins;
      }
      ctx.clock().set(base + static_cast<std::int64_t>(kAttackerPerStep));
      ++user_rounds;
      if (const auto mine = ctx.login("alice", "alice", kPassword); mine.ok()) {
        if (ctx.approve("alice", alice, mine.identifier) == "accepted") ++user_wins;
      }
      ctx.clock().set(base + 31);
      ++step;
    }

    // Fallback codes typed through the client.
    std::size_t guesses = 0, fallback_wins = 0;
    while (guesses < options.fallback_guesses) {
      const std::int64_t base = ctx.now();
      for (std::size_t i = 0; i < kAttackerPerStep && guesses < options.fallback_guesses; ++i) {
        ctx.clock().set(base + static_cast<std::int64_t>(i));
        const auto ticket = ctx.login("attacker", "alice", kPassword);
        if (!ticket.ok()) {
          ++pool_denials;
          continue;
        }
        ++guesses;
        if (ctx.manual("attacker", ticket.token, random_digits(ctx.rng())) == "accepted") {
          ++fallback_wins;
        }
      }
      ctx.clock().set(base + 31);
    }
    ctx.set_trace_enabled(true);

    ctx.metric("forged_pin_attempts", static_cast<double>(forged));
    ctx.metric("attacker_successes", static_cast<double>(attacker_wins));
    ctx.metric("fallback_guesses", static_cast<double>(guesses));
    ctx.metric("fallback_successes", static_cast<double>(fallback_wins));
    ctx.metric("user_rounds", static_cast<double>(user_rounds));
    ctx.metric("user_successes", static_cast<double>(user_wins));
    ctx.check("no forged PIN is ever accepted",
              forged >= options.forged_attempts && attacker_wins == 0,
              fmt_count(attacker_wins, forged));
    ctx.check("no guessed fallback code is accepted", fallback_wins == 0,
              fmt_count(fallback_wins, guesses));
    ctx.check("legitimate user succeeds in every parallel round", user_wins == user_rounds,
              fmt_count(user_wins, user_rounds));
    ctx.check("attacker logins always receive an identifier", pool_denials == 0,
              std::to_string(pool_denials) + " denials");
  };
  return s;
}

Scenario scenario_concurrent_attack(const ConcurrentAttackOptions& options) {
  Scenario s;
  s.name = "concurrent_attack";
  s.description =
      "Attacker with the stolen password logs in at the same moment as the user; the user "
      "approves only the identifier shown to her";
  s.config = harness_config();
  s.body = [options](ScenarioContext& ctx) {
    const auto alice = ctx.enroll("alice", kPassword);
    settle(ctx);
    const auto human = perfect_copy();
    const std::int64_t step = ctx.config().session_timeout_s + 1;

    std::size_t same_identifier = 0, user_wins = 0, attacker_wins = 0, attacker_timeouts = 0;
    std::size_t user_first_ok = 0, attacker_first_ok = 0;
    for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
      ctx.set_trace_enabled(rep < 4);
      const bool user_first = rep % 2 == 0;
      LoginResult user, attacker;
      if (user_first) {
        user = ctx.login("alice", "alice", kPassword);
        attacker = ctx.login("attacker", "alice", kPassword);
      } else {
        attacker = ctx.login("attacker", "alice", kPassword);
        user = ctx.login("alice", "alice", kPassword);
      }
      if (!user.ok() || !attacker.ok()) {
        throw std::runtime_error("login refused in repetition " + std::to_string(rep));
      }
      if (user.identifier == attacker.identifier) ++same_identifier;

      const auto shown = ids::Identifier::parse(user.identifier);
      ctx.clock().advance(2);
      ctx.approve("alice", alice, human(*shown, ctx.rng()));
      ctx.clock().advance(step - 2);

      const bool user_ok = ctx.status(user.token) == "succeeded";
      const auto attacker_status = ctx.status(attacker.token);
      user_wins += user_ok;
      attacker_wins += attacker_status == "succeeded";
      attacker_timeouts += attacker_status == "timed_out";
      const bool good = user_ok && attacker_status == "timed_out";
      (user_first ? user_first_ok : attacker_first_ok) += good;
    }

    // The user's PIN replayed against the attacker's identifier. This fails
    // the attacker's session, so it runs apart from the loop above.
    std::size_t probe_rejected = 0, probe_user_ok = 0;
    for (std::size_t rep = 0; rep < options.probe_repetitions; ++rep) {
      ctx.set_trace_enabled(rep < 2);
      const auto user = ctx.login("alice", "alice", kPassword);
      const auto attacker = ctx.login("attacker", "alice", kPassword);
      if (!user.ok() || !attacker.ok()) throw std::runtime_error("probe login refused");
      if (user.identifier == attacker.identifier) ++same_identifier;
      const auto pin = alice.pin_for(user.identifier, ctx.now()).to_hex();
      probe_rejected += ctx.submit("attacker", "alice", attacker.identifier, pin) == "rejected";
      probe_user_ok += ctx.approve("alice", alice, user.identifier) == "accepted";
      ctx.clock().advance(step);
    }

    // Both logins race on real threads at one frozen virtual instant.
    std::size_t race_ok = 0;
    for (std::size_t rep = 0; rep < options.race_repetitions; ++rep) {
      ctx.set_trace_enabled(false);
      LoginResult a, b;
      std::latch go(2);
      std::thread ta([&] {
        go.arrive_and_wait();
        a = ctx.login("alice", "alice", kPassword);
      });
      std::thread tb([&] {
        go.arrive_and_wait();
        b = ctx.login("attacker", "alice", kPassword);
      });
      ta.join();
      tb.join();
      if (!a.ok() || !b.ok()) throw std::runtime_error("raced login refused");
      if (a.identifier == b.identifier) ++same_identifier;
      ctx.approve("alice", alice, a.identifier);
      ctx.clock().advance(step);
      race_ok += ctx.status(a.token) == "succeeded" && ctx.status(b.token) == "timed_out";
    }
    ctx.set_trace_enabled(true);

    const std::size_t half = options.repetitions / 2;
    ctx.metric("repetitions", static_cast<double>(options.repetitions));
    ctx.metric("identifier_collisions", static_cast<double>(same_identifier));
    ctx.metric("attacker_successes", static_cast<double>(attacker_wins));
    ctx.metric("user_successes", static_cast<double>(user_wins));
    ctx.check("concurrent sessions always receive different identifiers", same_identifier == 0,
              std::to_string(same_identifier) + " collisions");
    ctx.check("attacker session never succeeds", attacker_wins == 0,
              fmt_count(attacker_wins, options.repetitions));
    ctx.check("user session succeeds in every repetition", user_wins == options.repetitions,
              fmt_count(user_wins, options.repetitions));
    ctx.check("attacker session times out in every repetition",
              attacker_timeouts == options.repetitions,
              fmt_count(attacker_timeouts, options.repetitions));
    ctx.check("outcome is the same with either login order",
              user_first_ok == options.repetitions - half && attacker_first_ok == half,
              fmt_count(user_first_ok, options.repetitions - half) + " user first, " +
                  fmt_count(attacker_first_ok, half) + " attacker first");
    ctx.check("user's PIN against the attacker's identifier is rejected",
              probe_rejected == options.probe_repetitions &&
                  probe_user_ok == options.probe_repetitions,
              fmt_count(probe_rejected, options.probe_repetitions));
    ctx.check("threaded login races behave the same", race_ok == options.race_repetitions,
              fmt_count(race_ok, options.race_repetitions));
  };
  return s;
}

Scenario scenario_channel_replay() {
  Scenario s;
  s.name = "channel_replay";
  s.description =
      "An (identifier, PIN) pair recorded on the device-server channel is replayed by an "
      "attacker who also knows the password";
  s.config = harness_config();
  s.body = [](ScenarioContext& ctx) {
    const auto alice = ctx.enroll("alice", kPassword);
    ctx.enroll("bob", kBobPassword);
    settle(ctx);
    const std::int64_t cooldown = ctx.config().identifier_cooldown_s;
    const std::int64_t t = ctx.now() + 7;

    std::string identifier, pin;
    ctx.at(t, "user logs in and approves", [&] {
      const auto ticket = ctx.login("alice", "alice", kPassword);
      identifier = ticket.identifier;
      pin = alice.pin_for(identifier, ctx.now()).to_hex();
      const auto result = ctx.submit("alice", "alice", identifier, pin);
      ctx.check("recorded approval is accepted", result == "accepted", result);
    });

    struct Replay {
      std::int64_t offset;
      std::string name;
      bool expect_reacquired;
    };
    const std::vector<Replay> replays = {
        {1, "t+1", false},
        {cooldown - 1, "t+cooldown-1", false},
        {cooldown + 1, "t+cooldown+1", true},
    };
    for (const auto& r : replays) {
      ctx.at(t + r.offset, "replay at " + r.name, [&ctx, &identifier, &pin, r] {
        std::size_t logins = 0;
        const auto fresh = reacquire(ctx, "attacker", "alice", kPassword, identifier, logins);
        const auto result = ctx.submit("attacker", "alice", identifier, pin);
        ctx.metric("replay_" + r.name + "_logins", static_cast<double>(logins));
        ctx.check("replay at " + r.name + " is rejected", result == "rejected", result);
        ctx.check(std::string("identifier at ") + r.name +
                      (r.expect_reacquired ? " is held by a fresh session"
                                           : " is still cooling down"),
                  fresh.has_value() == r.expect_reacquired,
                  fresh ? "reacquired after " + std::to_string(logins) + " logins"
                        : "not issued after " + std::to_string(logins) + " logins");
      });
    }

    ctx.at(t + 1, "replay against another user", [&] {
      std::size_t logins = 0;
      const auto fresh = reacquire(ctx, "attacker", "bob", kBobPassword, identifier, logins);
      const auto result = ctx.submit("attacker", "bob", identifier, pin);
      ctx.check("replay against another user holding the same identifier is rejected",
                fresh.has_value() && result == "rejected",
                (fresh ? "bob holds " : "bob never got ") + identifier + ", " + result);
    });
    ctx.run_schedule();
    ctx.metric("cooldown_s", static_cast<double>(cooldown));
    ctx.metric("slice_window", ctx.config().slice_window);
  };
  return s;
}

Scenario scenario_pin_scraping(const PinScrapingOptions& options) {
  Scenario s;
  s.name = "pin_scraping";
  s.description =
      "PINs harvested on the device-server channel are submitted against every other "
      "concurrent session of the same user";
  s.config = harness_config();
  s.config.max_concurrent_sessions_per_user = options.sessions;
  s.body = [options](ScenarioContext& ctx) {
    const auto alice = ctx.enroll("alice", kPassword);
    settle(ctx);
    const std::size_t n = options.sessions;
    std::size_t cross = 0, cross_accepted = 0, own_accepted = 0, duplicates_accepted = 0;
    std::size_t double_success = 0, targets_with_password = 0;

    for (std::size_t round = 0; round < n; ++round) {
      ctx.set_trace_enabled(round == 0);
      std::vector<LoginResult> open;
      for (std::size_t i = 0; i < n; ++i) {
        auto ticket = ctx.login("alice", "alice", kPassword);
        if (!ticket.ok()) throw std::runtime_error("login refused: " + ticket.error);
        open.push_back(std::move(ticket));
      }
      ctx.clock().advance(1);
      for (const auto& session : ctx.server().sessions()) {
        targets_with_password += session.status == server::SessionStatus::active &&
                                 session.password_ok;
      }
      // The device sends the PIN for session `round`; the attacker grabs it
      // first and tries it on every other session.
      const auto scraped = alice.pin_for(open[round].identifier, ctx.now()).to_hex();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == round) continue;
        ++cross;
        cross_accepted +=
            ctx.submit("attacker", "alice", open[j].identifier, scraped) == "accepted";
      }
      own_accepted += ctx.submit("device", "alice", open[round].identifier, scraped) == "accepted";
      duplicates_accepted +=
          ctx.submit("device", "alice", open[round].identifier, scraped) == "accepted";
      std::size_t succeeded = 0;
      for (const auto& ticket : open) succeeded += ctx.status(ticket.token) == "succeeded";
      double_success += succeeded != 1;
      settle(ctx);
    }
    ctx.set_trace_enabled(true);

    ctx.metric("cross_session_submissions", static_cast<double>(cross));
    ctx.metric("cross_session_acceptances", static_cast<double>(cross_accepted));
    ctx.check("no scraped PIN is accepted on another session",
              cross == n * (n - 1) && cross_accepted == 0, fmt_count(cross_accepted, cross));
    ctx.check("scraped PINs fail even though every target session has the password",
              targets_with_password == n * n && cross_accepted == 0,
              std::to_string(targets_with_password) + " password-backed targets");
    ctx.check("each genuine delivery is accepted", own_accepted == n, fmt_count(own_accepted, n));
    ctx.check("duplicate delivery does not succeed twice",
              duplicates_accepted == 0 && double_success == 0,
              std::to_string(duplicates_accepted) + " duplicates accepted");
  };
  return s;
}

Scenario scenario_slip_far(const SlipFarOptions& options) {
  Scenario s;
  s.name = options.distance_one_dictionary ? "slip_far_distance_one" : "slip_far";
  s.description =
      "A user draws the displayed pattern with single-segment slips while an attacker session "
      "holds another dictionary identifier";
  s.config = harness_config();
  if (options.distance_one_dictionary) {
    std::vector<ids::Identifier> entries;
    for (const char* p : {"1234", "1235", "1236", "1238"}) {
      entries.push_back(ids::Identifier::from_pattern(*ids::Pattern::parse(p)));
    }
    s.config.pattern_dictionary.emplace(IdentifierKind::pattern, std::move(entries), 1);
    s.config.max_concurrent_sessions_per_user = 2;
  }
  s.body = [options](ScenarioContext& ctx) {
    const auto alice = ctx.enroll("alice", kPassword);
    settle(ctx);
    const auto human = single_slip(options.slip_probability);
    const std::int64_t step =
        ctx.config().session_timeout_s + ctx.config().identifier_cooldown_s + 1;

    std::size_t slips = 0, false_accepts = 0, false_rejects = 0, mismatched = 0;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      ctx.set_trace_enabled(trial < 8);
      LoginResult user, attacker;
      if (ctx.rng().uniform(2) == 0) {
        user = ctx.login("alice", "alice", kPassword);
        attacker = ctx.login("attacker", "alice", kPassword);
      } else {
        attacker = ctx.login("attacker", "alice", kPassword);
        user = ctx.login("alice", "alice", kPassword);
      }
      if (!user.ok() || !attacker.ok()) throw std::runtime_error("login refused");

      const auto shown = ids::Identifier::parse(user.identifier);
      const std::string drawn = human(*shown, ctx.rng());
      const bool slipped = drawn != user.identifier;
      slips += slipped;
      ctx.clock().advance(3);
      ctx.approve("alice", alice, drawn);

      const bool user_ok = ctx.status(user.token) == "succeeded";
      const bool attacker_ok = ctx.status(attacker.token) == "succeeded";
      false_accepts += attacker_ok;
      false_rejects += !user_ok;
      mismatched += user_ok == slipped;
      ctx.clock().advance(step - 3);
    }
    ctx.set_trace_enabled(true);

    const double n = static_cast<double>(options.trials);
    const double p = options.slip_probability;
    const double far = static_cast<double>(false_accepts) / n;
    const double frr = static_cast<double>(false_rejects) / n;
    // Two-sided 99% normal interval for a binomial count.
    const double half_width = 2.5758 * std::sqrt(n * p * (1 - p));
    const double expected = n * p;
    ctx.metric("trials", n);
    ctx.metric("slip_probability", p);
    ctx.metric("slips", static_cast<double>(slips));
    ctx.metric("false_accepts", static_cast<double>(false_accepts));
    ctx.metric("false_rejects", static_cast<double>(false_rejects));
    ctx.metric("far", far);
    ctx.metric("frr", frr);
    ctx.metric("frr_interval_low", (expected - half_width) / n);
    ctx.metric("frr_interval_high", (expected + half_width) / n);
    ctx.note(
        "FAR and FRR here come from a formal single-slip error model, not from human trials; "
        "they show what the dictionary distance guarantees, not how people draw.");

    ctx.check("FAR is exactly zero", false_accepts == 0, fmt_count(false_accepts, options.trials));
    ctx.check("FRR lies in the 99% binomial interval around the slip probability",
              std::abs(static_cast<double>(false_rejects) - expected) <= half_width,
              std::to_string(false_rejects) + " rejects, expected " + std::to_string(expected) +
                  " +/- " + std::to_string(half_width));
    ctx.check("a draw is accepted exactly when it did not slip", mismatched == 0,
              std::to_string(mismatched) + " mismatches");
  };
  return s;
}

std::vector<Scenario> bundled_scenarios() {
  return {scenario_client_compromise(), scenario_concurrent_attack(), scenario_channel_replay(),
          scenario_pin_scraping(), scenario_slip_far()};
}

Scenario control_replay_short_cooldown() {
  Scenario s = scenario_channel_replay();
  s.name = "replay_short_cooldown";
  s.description += " (cooldown shorter than the drift window)";
  s.config.identifier_cooldown_s = 30;
  s.check = server::AuthServer::ConfigCheck::skip;
  return s;
}

Scenario control_replay_wide_window() {
  Scenario s = scenario_channel_replay();
  s.name = "replay_wide_window";
  s.description += " (verification window of 100 slices)";
  s.config.slice_window = 100;
  s.check = server::AuthServer::ConfigCheck::skip;
  return s;
}

Scenario control_slip_far_distance_one(std::size_t trials) {
  return scenario_slip_far({.trials = trials, .distance_one_dictionary = true});
}

std::vector<Scenario> negative_controls() {
  return {control_replay_short_cooldown(), control_replay_wide_window(),
          control_slip_far_distance_one()};
}

std::optional<Scenario> find_scenario(std::string_view name) {
  for (auto& s : bundled_scenarios()) {
    if (s.name == name) return s;
  }
  for (auto& s : negative_controls()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& s : bundled_scenarios()) names.push_back(s.name);
  for (const auto& s : negative_controls()) names.push_back(s.name);
  return names;
}

}  // namespace twod::harness
