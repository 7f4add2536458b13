//
// Copyright 2026 The Evoke Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include <gtest/gtest.h>

#include "evoke/evoke.hpp"

namespace evoke {
namespace {

TEST(AttackConstraintsTest, ReferencePairValidates) {
  EXPECT_TRUE(verify_attack_constraints("that's pure pr hype", "tha'cs pure pr hyp"));
}

TEST(AttackConstraintsTest, SingleEditKinds) {
  EXPECT_TRUE(verify_attack_constraints("pretty", "prettye"));
  EXPECT_TRUE(verify_attack_constraints("pretty", "prtty"));
  EXPECT_TRUE(verify_attack_constraints("pretty", "pretyt"));
  EXPECT_TRUE(verify_attack_constraints("pretty", "prxtty"));
  EXPECT_FALSE(verify_attack_constraints("pretty", "pxrtty x"));
  EXPECT_FALSE(verify_attack_constraints("pretty", "pxxtty"));
}

TEST(AttackConstraintsTest, IdentityAndWordBudget) {
  EXPECT_TRUE(verify_attack_constraints("hello world", "hello world"));
  EXPECT_EQ(changed_words("hello world", "hello world"), std::optional<std::size_t>(0));
  EXPECT_FALSE(verify_attack_constraints("pretty good fun day now", "pxetty gxod fxn dxy nxw"));
  EXPECT_TRUE(verify_attack_constraints("pretty good fun day now", "pxetty gxod fxn dxy now"));
  EXPECT_FALSE(verify_attack_constraints("two words", "twowords"));
}

TEST(AttackTest, NothingToAttack) {
  EXPECT_THROW(attack("a", 1), NothingToAttack);
  EXPECT_THROW(attack("", 1), NothingToAttack);
  EXPECT_THROW(attack("I a", 1), NothingToAttack);
}

TEST(AttackTest, DeterministicAndValid) {
  const std::string s = "the movie was pretty good and the actors really shine";
  const std::string a = attack(s, 42);
  EXPECT_EQ(a, attack(s, 42));
  EXPECT_NE(a, s);
  EXPECT_TRUE(verify_attack_constraints(s, a));
  const auto n = changed_words(s, a);
  ASSERT_TRUE(n);
  EXPECT_GE(*n, 1u);
  EXPECT_LE(*n, 4u);
}

TEST(AttackTest, PreservesWhitespaceLayout) {
  const std::string s = "  spaced \t out   words ";
  const std::string a = attack(s, 5);
  EXPECT_EQ(a.substr(0, 2), "  ");
  EXPECT_EQ(a.back(), ' ');
  EXPECT_NE(a.find(" \t "), std::string::npos);
}

TEST(AttackTest, SeedsDiffer) {
  const std::string s = "a long enough sentence gives the attack plenty of words to choose from";
  std::set<std::string> outs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) outs.insert(attack(s, seed));
  EXPECT_GT(outs.size(), 10u);
}

TEST(AttackDatasetTest, KeepsGoldsAndCount) {
  const std::vector<Example> data = {
      {"1", "that's pure pr hype", "0"}, {"2", "a", "1"}, {"3", "wonderful acting", "1"}};
  const auto adv = attack_dataset(data, 7);
  ASSERT_EQ(adv.examples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(adv.examples[i].gold_output, data[i].gold_output);
    EXPECT_EQ(adv.examples[i].id, data[i].id + "-adv");
    EXPECT_TRUE(verify_example_attack(data[i], adv.examples[i]));
  }
  EXPECT_EQ(adv.unperturbed, (std::vector<std::string>{"2"}));
  EXPECT_EQ(attack_dataset(data, 7).examples, adv.examples);
}

TEST(AttackDatasetTest, FieldSelectionByTabSegment) {
  const std::vector<Example> data = {{"q", "how do magnets work\twhat makes magnets attract", "1"}};
  const auto only_second = attack_dataset(data, 3, {"input.1"});
  const auto segs = split(only_second.examples[0].input, '\t');
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0], "how do magnets work");
  EXPECT_NE(segs[1], "what makes magnets attract");
  EXPECT_THROW(attack_dataset(data, 3, {"output"}), ConfigError);
}

}  // namespace
}  // namespace evoke
