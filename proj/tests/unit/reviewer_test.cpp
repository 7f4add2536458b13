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

const Prompt kCandidate = make_root_prompt("p0", "Identify the fallacy.");

CandidateEvaluation scored(std::size_t i, double s) {
  return {"c" + std::to_string(i), Score(s), std::nullopt, 1};
}

std::vector<CandidateEvaluation> evals(const std::vector<double>& s) {
  std::vector<CandidateEvaluation> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(scored(i, s[i]));
  return out;
}

TEST(ReviewerPromptTest, EmptyMemoryAndDescription) {
  const auto r = render_reviewer_prompt("logical fallacy detection", kCandidate, {});
  EXPECT_NE(r.user.find("History that may help you: (none)\n"), std::string::npos);
  EXPECT_NE(r.user.find("The task at hand is titled: logical fallacy detection\n"),
            std::string::npos);
  EXPECT_NE(r.user.find("The instruction to be rated is as follows: Identify the fallacy.\n"),
            std::string::npos);
  EXPECT_EQ(r.tag, RoleTag::reviewer);
  EXPECT_EQ(r.temperature, 0.0);
}

TEST(ReviewerPromptTest, MemoryLineShowsPercentAccuracy) {
  const ReviewerMemoryEntry m{make_edit("added definitions", "t1-c0", 1), "Decide if fallacious.",
                              0.85};
  const auto r = render_reviewer_prompt("fallacies", kCandidate, {m});
  EXPECT_NE(r.user.find("85%"), std::string::npos);
  EXPECT_NE(r.user.find("[added definitions] | Decide if fallacious. #"), std::string::npos);
}

TEST(PromptDigestTest, TruncatesLongTextAndAppendsHash) {
  const std::string long_text(300, 'x');
  const std::string d = prompt_digest(long_text);
  EXPECT_EQ(d.substr(0, 123), std::string(120, 'x') + "...");
  EXPECT_EQ(d.size(), 123u + 2 + 8);
  EXPECT_NE(prompt_digest("short a"), prompt_digest("short b"));
  EXPECT_EQ(prompt_digest("short").find("..."), std::string::npos);
}

TEST(ScoreCandidatesTest, ScriptedScoresPassThrough) {
  auto b = parse_script(
      "{\"tag\": \"reviewer\", \"match\": {\"contains\": \"follows: one\\n\"}, \"response\": \"8\"}\n"
      "{\"tag\": \"reviewer\", \"match\": {\"contains\": \"follows: two\\n\"}, \"response\": \"6\"}\n");
  const Prompt a = make_child_prompt(kCandidate, "t1-c0", "one", PromptOrigin::author_edit);
  const Prompt c = make_child_prompt(kCandidate, "t1-c1", "two", PromptOrigin::author_edit);
  const auto r = score_candidates({a, c}, "task", {}, b, 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].eval.reviewer_score.value(), 8.0);
  EXPECT_EQ(r[1].eval.reviewer_score.value(), 6.0);
  EXPECT_EQ(r[1].eval.prompt, "t1-c1");
  EXPECT_FALSE(r[0].eval.task_accuracy);
}

TEST(ScoreCandidatesTest, ProseScoreParses) {
  auto b = parse_script("{\"default\": \"I'd give this a 9 for clarity\"}");
  EXPECT_EQ(score_candidates({kCandidate}, "task", {}, b, 1)[0].eval.reviewer_score.value(), 9.0);
}

TEST(ScoreCandidatesTest, UnparsableTwiceScoresFloorAndFlags) {
  auto b = parse_script("{\"default\": \"excellent work\"}");
  const auto r = score_candidates({kCandidate}, "task", {}, b, 1);
  EXPECT_TRUE(r[0].unratable);
  EXPECT_EQ(r[0].eval.reviewer_score.value(), 1.0);
}

TEST(TopNTest, TiesKeepIndexOrder) {
  EXPECT_EQ(top_n_indices(evals({6, 9, 9, 3}), 2), (std::vector<std::size_t>{1, 2}));
  const auto picked = select_top_n(evals({6, 9, 9, 3}), 2);
  EXPECT_EQ(picked[0].prompt, "c1");
  EXPECT_EQ(picked[1].prompt, "c2");
}

TEST(TopNTest, ClampsAndSingleton) {
  EXPECT_EQ(select_top_n(evals({4, 7, 5}), 10).size(), 3u);
  EXPECT_EQ(select_top_n(evals({5}), 1)[0].prompt, "c0");
  EXPECT_THROW(select_top_n(evals({5}), 0), PreconditionError);
}

}  // namespace
}  // namespace evoke
