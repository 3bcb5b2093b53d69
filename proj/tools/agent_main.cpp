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

// twod-agent: the device side as a command line tool.
//
//   twod-agent enroll <payload> --server <url>
//   twod-agent approve <account> <identifier> [--offline] [--now <unix>]
//   twod-agent list
//   twod-agent remove <account>
//
// Exit codes: 0 accepted or done, 1 rejected by the server, 2 usage or
// local error (including an unreachable server).

#include "twod/agent/agent.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <termios.h>
#include <unistd.h>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitError = 2;

std::string read_passphrase() {
  if (const char* env = std::getenv("TWOD_AGENT_PASSPHRASE"); env && *env) return env;
  if (!::isatty(STDIN_FILENO)) {
    std::string line;
    std::getline(std::cin, line);
    return line;
  }
  std::cerr << "store passphrase: " << std::flush;
  termios saved{};
  ::tcgetattr(STDIN_FILENO, &saved);
  termios quiet = saved;
  quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
  ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  std::string line;
  std::getline(std::cin, line);
  ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
  std::cerr << '\n';
  return line;
}

std::filesystem::path default_store() {
  if (const char* env = std::getenv("TWOD_AGENT_STORE"); env && *env) return env;
  const char* home = std::getenv("HOME");
  return std::filesystem::path(home ? home : ".") / ".2d2fa" / "agent.store";
}

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D-2FA device agent"};
  app.require_subcommand(1);
  std::string store_path;
  app.add_option("--store", store_path, "Enrollment store (default $TWOD_AGENT_STORE)");

  auto* enroll = app.add_subcommand("enroll", "Store an account from a provisioning payload");
  std::string payload, server_url;
  enroll->add_option("payload", payload, "2d2fa://enroll?... string")->required();
  enroll->add_option("--server", server_url, "Base URL of the server, e.g. http://host:8080")
      ->required();

  auto* approve = app.add_subcommand("approve", "Enter a displayed identifier and send the PIN");
  std::string account, identifier;
  bool offline = false;
  std::optional<std::int64_t> now;
  approve->add_option("account", account, "username@server")->required();
  approve->add_option("identifier", identifier, "Pattern digits, QR token or number")->required();
  approve->add_flag("--offline", offline, "Print the 8-digit fallback code instead of sending");
  approve->add_option("--now", now, "Unix time to compute the PIN for");

  app.add_subcommand("list", "List enrolled accounts");
  auto* remove = app.add_subcommand("remove", "Forget an account");
  std::string remove_account;
  remove->add_option("account", remove_account, "username@server")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  using twod::agent::AgentError;
  try {
    const std::filesystem::path path = store_path.empty() ? default_store() : std::filesystem::path(store_path);
    twod::agent::EnrollmentStore store(path, read_passphrase());
    twod::agent::HttpTransport transport;
    twod::agent::Agent agent(store, transport);

    if (app.got_subcommand(enroll)) {
      const auto a = agent.enroll(payload, server_url);
      std::cout << "enrolled " << a.label() << " (" << twod::ids::to_string(a.kind) << ")\n";
      return kExitOk;
    }
    if (app.got_subcommand(approve)) {
      const std::int64_t t = now.value_or(unix_now());
      if (offline) {
        const auto code = agent.approve_offline(account, identifier, t);
        std::cout << code.identifier << ' ' << code.digits << '\n';
        return kExitOk;
      }
      const auto approval = agent.approve(account, identifier, t);
      const bool accepted = approval.outcome == twod::agent::SubmitOutcome::accepted;
      std::cout << (accepted ? "accepted " : "rejected ") << approval.identifier << '\n';
      return accepted ? kExitOk : kExitRejected;
    }
    if (app.got_subcommand("list")) {
      for (const auto& label : agent.list()) std::cout << label << '\n';
      return kExitOk;
    }
    agent.remove(remove_account);
    std::cout << "removed " << remove_account << '\n';
    return kExitOk;
  } catch (const AgentError& e) {
    std::cerr << "twod-agent: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "twod-agent: " << e.what() << '\n';
    return kExitError;
  }
}
