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

#include "twod/identifier.hpp"

#include "twod/random.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace twod::ids {

namespace {

constexpr std::string_view kAlphanumeric =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

bool is_alnum(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_qr_token(std::string_view token) {
  return token.size() == kQrTokenLength && std::all_of(token.begin(), token.end(), is_alnum);
}

bool valid_numeric(std::string_view digits) {
  return digits.size() == kNumericLength && std::all_of(digits.begin(), digits.end(), is_digit);
}

std::string_view prefix_of(IdentifierKind kind) {
  switch (kind) {
    case IdentifierKind::pattern:
      return "PT:";
    case IdentifierKind::qr:
      return "QR:";
    case IdentifierKind::numeric:
      return "NUM:";
  }
  return "";
}

}  // namespace

std::string_view to_string(IdentifierKind kind) {
  switch (kind) {
    case IdentifierKind::pattern:
      return "pattern";
    case IdentifierKind::qr:
      return "qr";
    case IdentifierKind::numeric:
      return "numeric";
  }
  return "";
}

std::optional<IdentifierKind> parse_kind(std::string_view text) {
  for (auto kind : {IdentifierKind::pattern, IdentifierKind::qr, IdentifierKind::numeric}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

Identifier Identifier::from_pattern(Pattern pattern) {
  return Identifier(IdentifierKind::pattern, std::move(pattern));
}

Identifier Identifier::qr(std::string token) {
  if (!valid_qr_token(token)) {
    throw std::invalid_argument("QR token must be 12 alphanumeric characters");
  }
  return Identifier(IdentifierKind::qr, std::move(token));
}

Identifier Identifier::numeric(std::string digits) {
  if (!valid_numeric(digits)) {
    throw std::invalid_argument("numeric identifier must be 4 digits");
  }
  return Identifier(IdentifierKind::numeric, std::move(digits));
}

std::optional<Identifier> Identifier::from_input(IdentifierKind kind, std::string_view input) {
  switch (kind) {
    case IdentifierKind::pattern:
      if (auto p = Pattern::parse(input)) return from_pattern(std::move(*p));
      return std::nullopt;
    case IdentifierKind::qr:
      if (valid_qr_token(input)) return Identifier(kind, std::string(input));
      return std::nullopt;
    case IdentifierKind::numeric:
      if (valid_numeric(input)) return Identifier(kind, std::string(input));
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Identifier> Identifier::parse(std::string_view canonical) {
  for (auto kind : {IdentifierKind::pattern, IdentifierKind::qr, IdentifierKind::numeric}) {
    const auto prefix = prefix_of(kind);
    if (canonical.substr(0, prefix.size()) == prefix) {
      return from_input(kind, canonical.substr(prefix.size()));
    }
  }
  return std::nullopt;
}

std::string Identifier::bare() const {
  if (const auto* p = std::get_if<Pattern>(&payload_)) {
    return p->to_string();
  }
  return std::get<std::string>(payload_);
}

std::string Identifier::canonical() const { return std::string(prefix_of(kind_)) + bare(); }

Identifier generate_token_identifier(IdentifierKind kind, RandomSource& rng) {
  switch (kind) {
    case IdentifierKind::qr: {
      std::string token(kQrTokenLength, '\0');
      for (char& c : token) c = kAlphanumeric[rng.uniform(kAlphanumeric.size())];
      return Identifier::qr(std::move(token));
    }
    case IdentifierKind::numeric: {
      std::string digits(kNumericLength, '\0');
      for (char& c : digits) c = static_cast<char>('0' + rng.uniform(10));
      return Identifier::numeric(std::move(digits));
    }
    case IdentifierKind::pattern:
      break;
  }
  throw std::invalid_argument("pattern identifiers come from a dictionary");
}

IdentifierDictionary::IdentifierDictionary(IdentifierKind kind, std::vector<Identifier> entries,
                                           std::size_t min_distance)
    : kind_(kind), entries_(std::move(entries)), min_distance_(min_distance) {
  if (entries_.empty()) {
    throw std::invalid_argument("dictionary must not be empty");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& entry = entries_[i];
    if (entry.kind() != kind_) {
      throw std::invalid_argument("dictionary mixes identifier kinds");
    }
    if (!seen.insert(entry.canonical()).second) {
      throw std::invalid_argument("duplicate dictionary entry " + entry.canonical());
    }
    if (kind_ != IdentifierKind::pattern) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (similarity_distance(*entry.pattern(), *entries_[j].pattern()) < min_distance_) {
        throw std::invalid_argument("dictionary entries " + entries_[j].canonical() + " and " +
                                    entry.canonical() + " are too similar");
      }
    }
  }
}

IdentifierDictionary build_pattern_dictionary(const DictionaryOptions& options) {
  if (options.min_distance < 1 || options.max_size < 1) {
    throw std::invalid_argument("min_distance and max_size must be at least 1");
  }
  if (options.start_dot < 1 || options.start_dot > kGridDots) {
    throw std::invalid_argument("start_dot must be in [1, 9]");
  }
  std::vector<Pattern> admitted;
  for (auto& candidate : enumerate_patterns(options.length)) {
    if (admitted.size() >= options.max_size) break;
    if (candidate.dots().front() != options.start_dot) continue;
    const bool far_enough = std::all_of(admitted.begin(), admitted.end(), [&](const Pattern& p) {
      return similarity_distance(p, candidate) >= options.min_distance;
    });
    if (far_enough) admitted.push_back(std::move(candidate));
  }
  if (admitted.empty()) {
    throw std::invalid_argument("no pattern satisfies the dictionary constraints");
  }
  std::vector<Identifier> entries;
  entries.reserve(admitted.size());
  for (auto& p : admitted) entries.push_back(Identifier::from_pattern(std::move(p)));
  return IdentifierDictionary(IdentifierKind::pattern, std::move(entries), options.min_distance);
}

std::string export_dictionary(const IdentifierDictionary& dictionary) {
  std::string out;
  for (const auto& entry : dictionary.entries()) {
    out += entry.canonical();
    out += '\n';
  }
  return out;
}

IdentifierDictionary import_dictionary(std::string_view text, std::size_t min_distance) {
  std::vector<Identifier> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    if (eol == std::string_view::npos) {
      throw std::invalid_argument("dictionary line " + std::to_string(line_no) +
                                  " is not LF-terminated");
    }
    const std::string_view line = text.substr(0, eol);
    if (line.starts_with('#')) {
      text.remove_prefix(eol + 1);
      continue;
    }
    auto id = Identifier::parse(line);
    if (!id) {
      throw std::invalid_argument("dictionary line " + std::to_string(line_no) +
                                  " is not a canonical identifier");
    }
    entries.push_back(std::move(*id));
    text.remove_prefix(eol + 1);
  }
  if (entries.empty()) {
    throw std::invalid_argument("dictionary must not be empty");
  }
  const auto kind = entries.front().kind();
  return IdentifierDictionary(kind, std::move(entries), min_distance);
}

}  // namespace twod::ids
