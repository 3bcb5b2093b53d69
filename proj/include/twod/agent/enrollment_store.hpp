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

#include "twod/crypto.hpp"
#include "twod/identifier.hpp"
#include "twod/secrets.hpp"

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twod::agent {

struct Account {
  std::string server_name;
  std::string username;
  crypto::TotpKey key;
  ids::IdentifierKind kind = ids::IdentifierKind::pattern;
  std::string server_url;

  // "<username>@<server_name>"
  std::string label() const { return username + "@" + server_name; }
};

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accounts sealed with AES-256-GCM under a scrypt-derived passphrase key.
//
//   2D2FA-AGENT 1\n
//   {"kdf": {"n", "r", "p"}, "salt": hex, "sealed": hex}
//
// Reads take a shared flock on "<path>.lock", updates an exclusive one.
class EnrollmentStore {
 public:
  EnrollmentStore(std::filesystem::path path, std::string passphrase,
                  crypto::ScryptParams kdf = {});

  // Empty when the file does not exist yet. Throws StoreError for a wrong
  // passphrase or a damaged file.
  std::vector<Account> load() const;

  // Read-modify-write under the exclusive lock.
  void update(const std::function<void(std::vector<Account>&)>& mutate) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::vector<Account> read_unlocked() const;
  void write_unlocked(const std::vector<Account>& accounts) const;

  std::filesystem::path path_;
  std::string passphrase_;
  crypto::ScryptParams kdf_;
};

}  // namespace twod::agent
