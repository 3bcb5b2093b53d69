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
#include "twod/identifier.hpp"
#include "twod/provisioning.hpp"
#include "twod/random.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace {

using twod::ids::Identifier;
using twod::ids::IdentifierKind;

// Golden files carry a '#' license header; the rest is exporter output.
std::string read_golden(const std::string& path) {
  std::ifstream in(path);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.starts_with('#')) out += line + "\n";
  }
  return out;
}

TEST(Identifier, CanonicalForms) {
  EXPECT_EQ(Identifier::from_pattern(*twod::ids::Pattern::parse("1236")).canonical(), "PT:1236");
  EXPECT_EQ(Identifier::qr("Ab3dE5gH9jK1").canonical(), "QR:Ab3dE5gH9jK1");
  EXPECT_EQ(Identifier::numeric("0427").canonical(), "NUM:0427");
  EXPECT_EQ(Identifier::numeric("0427").bare(), "0427");
  EXPECT_THROW(Identifier::qr("short"), std::invalid_argument);
  EXPECT_THROW(Identifier::qr("Ab3dE5gH9jK|"), std::invalid_argument);
  EXPECT_THROW(Identifier::numeric("12345"), std::invalid_argument);
  EXPECT_THROW(Identifier::numeric("12a4"), std::invalid_argument);
}

TEST(Identifier, ParseRejects) {
  EXPECT_FALSE(Identifier::parse("PT:1324"));
  EXPECT_FALSE(Identifier::parse("1236"));
  EXPECT_FALSE(Identifier::parse("pt:1236"));
  EXPECT_FALSE(Identifier::parse("NUM:042"));
  EXPECT_FALSE(Identifier::parse("QR:Ab3dE5gH9jK1x"));
  EXPECT_FALSE(Identifier::parse(""));
  EXPECT_FALSE(Identifier::from_input(IdentifierKind::pattern, "1324"));
  EXPECT_EQ(Identifier::from_input(IdentifierKind::numeric, "0001")->canonical(), "NUM:0001");
}

TEST(Identifier, KindNames) {
  for (auto k : {IdentifierKind::pattern, IdentifierKind::qr, IdentifierKind::numeric}) {
    EXPECT_EQ(*twod::ids::parse_kind(twod::ids::to_string(k)), k);
  }
  EXPECT_FALSE(twod::ids::parse_kind("Pattern"));
}

TEST(Identifier, CanonicalRoundTripProperty) {
  twod::SeededRandom rng(31);
  for (std::size_t len = 2; len <= 9; ++len) {
    for (const auto& p : twod::ids::enumerate_patterns(len)) {
      const auto id = Identifier::from_pattern(p);
      const auto c = id.canonical();
      ASSERT_EQ(c.find('|'), std::string::npos);
      ASSERT_EQ(*Identifier::parse(c), id);
    }
  }
  for (int i = 0; i < 10'000; ++i) {
    for (auto kind : {IdentifierKind::qr, IdentifierKind::numeric}) {
      const auto id = twod::ids::generate_token_identifier(kind, rng);
      const auto c = id.canonical();
      ASSERT_EQ(c.find('|'), std::string::npos);
      ASSERT_EQ(*Identifier::parse(c), id);
      ASSERT_EQ(id.kind(), kind);
    }
  }
}

TEST(GenerateTokenIdentifier, Formats) {
  twod::SeededRandom rng(32);
  const std::regex numeric("^NUM:[0-9]{4}$"), qr("^QR:[A-Za-z0-9]{12}$");
  std::set<std::string> tokens;
  for (int i = 0; i < 1'000; ++i) {
    EXPECT_TRUE(std::regex_match(
        twod::ids::generate_token_identifier(IdentifierKind::numeric, rng).canonical(), numeric));
    const auto q = twod::ids::generate_token_identifier(IdentifierKind::qr, rng).canonical();
    EXPECT_TRUE(std::regex_match(q, qr));
    tokens.insert(q);
  }
  EXPECT_EQ(tokens.size(), 1'000u);
  EXPECT_THROW(twod::ids::generate_token_identifier(IdentifierKind::pattern, rng),
               std::invalid_argument);
}

TEST(Dictionary, DefaultIsTheGreedyMaximalSet) {
  const auto dict = twod::ids::build_pattern_dictionary();
  std::vector<std::string> got;
  for (const auto& e : dict.entries()) got.push_back(e.bare());
  const std::vector<std::string> expected = {
      "1234", "1243", "1253", "1263", "1274", "1294", "1423", "1432", "1452", "1472", "1483",
      "1492", "1523", "1532", "1542", "1562", "1572", "1582", "1592", "1623", "1632", "1652",
      "1672", "1683", "1692", "1832", "1842", "1852", "1862", "1872", "1892"};
  EXPECT_EQ(got, expected);
  EXPECT_EQ(dict.min_distance(), 2u);
  EXPECT_EQ(dict.kind(), IdentifierKind::pattern);
}

TEST(Dictionary, SoundAgainstBruteForceOracle) {
  const auto dict = twod::ids::build_pattern_dictionary();
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const auto& a = dict.entries()[i].pattern()->dots();
    EXPECT_EQ(a.front(), 1);
    EXPECT_EQ(a.size(), 4u);
    EXPECT_TRUE(oracle::geometric_valid(a));
    for (std::size_t j = i + 1; j < dict.size(); ++j) {
      EXPECT_GE(oracle::edit_distance(a, dict.entries()[j].pattern()->dots()), 2u);
    }
  }
}

TEST(Dictionary, GreedyIsMaximal) {
  // No fourgram from dot 1 left out of the default dictionary could be added.
  const auto dict = twod::ids::build_pattern_dictionary();
  for (const auto& p : oracle::brute_force_patterns(4)) {
    if (p.front() != 1) continue;
    std::size_t closest = 99;
    for (const auto& e : dict.entries()) {
      closest = std::min(closest, oracle::edit_distance(p, e.pattern()->dots()));
    }
    EXPECT_LT(closest, 2u);
  }
}

TEST(Dictionary, MaxSizeTenMatchesGoldenFile) {
  const auto dict = twod::ids::build_pattern_dictionary({.max_size = 10});
  EXPECT_EQ(dict.size(), 10u);
  const auto text = twod::ids::export_dictionary(dict);
  EXPECT_EQ(text, read_golden(TWOD_SOURCE_DIR "/data/dictionaries/fourgram_start1_d2_max10.txt"));
  EXPECT_EQ(text, twod::ids::export_dictionary(twod::ids::build_pattern_dictionary({.max_size = 10})));
}

TEST(Dictionary, FullSetMatchesGoldenFile) {
  const auto golden = read_golden(TWOD_SOURCE_DIR "/data/dictionaries/fourgram_start1_d2.txt");
  EXPECT_EQ(twod::ids::export_dictionary(twod::ids::build_pattern_dictionary()), golden);
  EXPECT_EQ(twod::ids::import_dictionary(golden, 2).size(), 31u);
}

TEST(Dictionary, MinDistanceOneAdmitsEverything) {
  const auto dict = twod::ids::build_pattern_dictionary({.min_distance = 1, .max_size = 50});
  const auto all = twod::ids::enumerate_patterns(4);
  std::size_t k = 0;
  for (const auto& p : all) {
    if (p.dots().front() != 1) continue;
    if (k == 50) break;
    EXPECT_EQ(*dict.entries()[k].pattern(), p);
    ++k;
  }
  EXPECT_EQ(dict.size(), 50u);
}

TEST(Dictionary, OversizedRequestReturnsMaximalSet) {
  EXPECT_EQ(twod::ids::build_pattern_dictionary({.max_size = 100'000}).size(), 31u);
}

TEST(Dictionary, SingleSlipClosure) {
  const auto dict = twod::ids::build_pattern_dictionary();
  std::set<std::string> entries;
  for (const auto& e : dict.entries()) entries.insert(e.canonical());
  for (const auto& e : dict.entries()) {
    for (const auto& slip : twod::ids::slip_variants(*e.pattern())) {
      EXPECT_FALSE(entries.contains(Identifier::from_pattern(slip).canonical()))
          << e.canonical() << " slips onto " << slip.to_string();
    }
  }
}

TEST(Dictionary, ConstructorChecks) {
  const auto a = Identifier::from_pattern(*twod::ids::Pattern::parse("1234"));
  const auto b = Identifier::from_pattern(*twod::ids::Pattern::parse("1236"));
  EXPECT_THROW(twod::ids::IdentifierDictionary(IdentifierKind::pattern, {a, b}, 2),
               std::invalid_argument);
  EXPECT_NO_THROW(twod::ids::IdentifierDictionary(IdentifierKind::pattern, {a, b}, 1));
  EXPECT_THROW(twod::ids::IdentifierDictionary(IdentifierKind::pattern, {a, a}, 1),
               std::invalid_argument);
  EXPECT_THROW(twod::ids::IdentifierDictionary(IdentifierKind::pattern, {}, 1),
               std::invalid_argument);
  EXPECT_THROW(
      twod::ids::IdentifierDictionary(IdentifierKind::pattern, {a, Identifier::numeric("0001")}, 1),
      std::invalid_argument);
  EXPECT_THROW(twod::ids::build_pattern_dictionary({.min_distance = 0}), std::invalid_argument);
  EXPECT_THROW(twod::ids::build_pattern_dictionary({.start_dot = 0}), std::invalid_argument);
}

TEST(Dictionary, ImportRejectsBadText) {
  EXPECT_THROW(twod::ids::import_dictionary("PT:1234\nPT:1236\n", 2), std::invalid_argument);
  EXPECT_THROW(twod::ids::import_dictionary("PT:1234", 2), std::invalid_argument);
  EXPECT_THROW(twod::ids::import_dictionary("PT:1324\n", 2), std::invalid_argument);
  EXPECT_THROW(twod::ids::import_dictionary("", 2), std::invalid_argument);
  EXPECT_EQ(twod::ids::import_dictionary("NUM:0001\nNUM:0002\n", 2).size(), 2u);
  EXPECT_EQ(twod::ids::import_dictionary("# note\nPT:1234\n", 2).size(), 1u);
  EXPECT_THROW(twod::ids::import_dictionary("# only a comment\n", 2), std::invalid_argument);
}

TEST(Provisioning, UriRoundTrip) {
  twod::SeededRandom rng(40);
  const twod::ProvisioningPayload p{"demo server", "al&ice=1", twod::crypto::TotpKey::generate(rng),
                                    IdentifierKind::qr};
  const auto uri = p.to_uri();
  EXPECT_TRUE(uri.starts_with("2d2fa://enroll?sn=demo%20server&un=al%26ice%3D1&key="));
  EXPECT_TRUE(uri.ends_with("&kind=qr"));
  const auto back = twod::ProvisioningPayload::parse(uri);
  ASSERT_TRUE(back);
  EXPECT_EQ(back->server_name, p.server_name);
  EXPECT_EQ(back->username, p.username);
  EXPECT_EQ(back->key, p.key);
  EXPECT_EQ(back->kind, p.kind);
}

TEST(Provisioning, RejectsMalformed) {
  const std::string key(32, 'a');
  EXPECT_TRUE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + key + "&kind=pattern"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + key.substr(1) + "&kind=pattern"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + std::string(32, 'g') + "&kind=pattern"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + key + "&kind=pin"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + key));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("http://enroll?sn=s&un=u&key=" + key + "&kind=qr"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=%zz&key=" + key + "&kind=qr"));
  EXPECT_FALSE(twod::ProvisioningPayload::parse("2d2fa://enroll?sn=s&un=u&key=" + key + "&kind=qr&x=1"));
}

TEST(Provisioning, PercentCodec) {
  EXPECT_EQ(twod::percent_encode("a b/ü"), "a%20b%2F%C3%BC");
  EXPECT_EQ(*twod::percent_decode("a%20b%2f%C3%BC"), "a b/ü");
  EXPECT_FALSE(twod::percent_decode("%4"));
  EXPECT_FALSE(twod::percent_decode("%"));
}

}  // namespace
