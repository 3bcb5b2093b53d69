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

#include "twod/agent/enrollment_store.hpp"

#include "twod/random.hpp"

#include "json.hpp"

#include <openssl/crypto.h>

#include <fstream>
#include <sstream>
#include <system_error>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace twod::agent {

namespace {

using nlohmann::json;

constexpr std::string_view kHeader = "2D2FA-AGENT 1\n";
constexpr std::string_view kAad = "2d2fa-agent-store-v1";
constexpr std::size_t kSaltSize = 16;

class FileLock {
 public:
  FileLock(const std::filesystem::path& path, int operation) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) {
      throw StoreError("cannot open lock file " + path.string());
    }
    while (::flock(fd_, operation) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw StoreError("cannot lock " + path.string());
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::filesystem::path lock_path(const std::filesystem::path& store) {
  std::filesystem::path p = store;
  p += ".lock";
  return p;
}

json account_to_json(const Account& a) {
  return {{"server_name", a.server_name},
          {"username", a.username},
          {"key", a.key.to_hex()},
          {"kind", ids::to_string(a.kind)},
          {"server_url", a.server_url}};
}

Account account_from_json(const json& j) {
  auto key = crypto::TotpKey::from_hex(j.at("key").get<std::string>());
  auto kind = ids::parse_kind(j.at("kind").get<std::string>());
  if (!key || !kind) throw StoreError("enrollment store holds a damaged account");
  return Account{j.at("server_name").get<std::string>(), j.at("username").get<std::string>(),
                 *key, *kind, j.at("server_url").get<std::string>()};
}

}  // namespace

EnrollmentStore::EnrollmentStore(std::filesystem::path path, std::string passphrase,
                                 crypto::ScryptParams kdf)
    : path_(std::move(path)), passphrase_(std::move(passphrase)), kdf_(kdf) {
  if (passphrase_.empty()) {
    throw StoreError("the enrollment store passphrase must not be empty");
  }
}

std::vector<Account> EnrollmentStore::load() const {
  FileLock lock(lock_path(path_), LOCK_SH);
  return read_unlocked();
}

void EnrollmentStore::update(const std::function<void(std::vector<Account>&)>& mutate) const {
  FileLock lock(lock_path(path_), LOCK_EX);
  auto accounts = read_unlocked();
  mutate(accounts);
  write_unlocked(accounts);
}

std::vector<Account> EnrollmentStore::read_unlocked() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path_)) return {};
    throw StoreError("cannot read " + path_.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (!text.starts_with(kHeader)) {
    throw StoreError(path_.string() + " is not an enrollment store");
  }
  try {
    const json outer = json::parse(text.substr(kHeader.size()));
    crypto::ScryptParams kdf;
    kdf.n = outer.at("kdf").at("n").get<std::uint64_t>();
    kdf.r = outer.at("kdf").at("r").get<std::uint32_t>();
    kdf.p = outer.at("kdf").at("p").get<std::uint32_t>();
    auto salt = crypto::from_hex(outer.at("salt").get<std::string>());
    auto sealed = crypto::from_hex(outer.at("sealed").get<std::string>());
    if (!salt || !sealed) throw StoreError("enrollment store is damaged");

    auto key = crypto::derive_key(passphrase_, *salt, kdf);
    auto plain = crypto::open(key, *sealed, kAad);
    OPENSSL_cleanse(key.data(), key.size());
    if (!plain) {
      throw StoreError("cannot unlock enrollment store (wrong passphrase?)");
    }
    const json inner = json::parse(plain->begin(), plain->end());
    OPENSSL_cleanse(plain->data(), plain->size());
    std::vector<Account> accounts;
    for (const auto& a : inner.at("accounts")) accounts.push_back(account_from_json(a));
    return accounts;
  } catch (const json::exception& e) {
    throw StoreError(std::string("enrollment store is damaged: ") + e.what());
  }
}

void EnrollmentStore::write_unlocked(const std::vector<Account>& accounts) const {
  SystemRandom rng;
  std::array<std::uint8_t, kSaltSize> salt{};
  rng.fill(salt);

  json inner = {{"accounts", json::array()}};
  for (const auto& a : accounts) inner["accounts"].push_back(account_to_json(a));
  std::string plain = inner.dump();

  auto key = crypto::derive_key(passphrase_, salt, kdf_);
  const auto sealed = crypto::seal(
      key, std::span(reinterpret_cast<const std::uint8_t*>(plain.data()), plain.size()), kAad, rng);
  OPENSSL_cleanse(key.data(), key.size());
  OPENSSL_cleanse(plain.data(), plain.size());

  const json outer = {{"kdf", {{"n", kdf_.n}, {"r", kdf_.r}, {"p", kdf_.p}}},
                      {"salt", crypto::to_hex(salt)},
                      {"sealed", crypto::to_hex(sealed)}};

  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::filesystem::path temp = path_;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << kHeader << outer.dump() << '\n';
    if (!out) throw StoreError("cannot write " + temp.string());
  }
  std::filesystem::permissions(temp, std::filesystem::perms::owner_read |
                                         std::filesystem::perms::owner_write);
  std::filesystem::rename(temp, path_);
}

}  // namespace twod::agent
