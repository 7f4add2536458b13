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

#include <set>
#include <stdexcept>
#include <thread>

#include "evoke/evoke.hpp"

namespace evoke {
namespace {

CandidateEvaluation eval_of(const std::string& id, double score, std::optional<double> acc,
                            int iteration = 1) {
  return {id, Score(score), acc, iteration};
}

TEST(ScoreTest, AcceptsScaleBoundsAndRejectsOutside) {
  EXPECT_EQ(Score(1).value(), 1.0);
  EXPECT_EQ(Score(10).value(), 10.0);
  EXPECT_EQ(Score(7.5).str(), "7.5");
  EXPECT_THROW(Score(0.99), PreconditionError);
  EXPECT_THROW(Score(10.01), PreconditionError);
  EXPECT_THROW(Score(std::nan("")), PreconditionError);
  EXPECT_LT(Score(3), Score(4));
}

TEST(ExampleTest, ValidationRejectsEmptyFieldsAndDuplicates) {
  EXPECT_NO_THROW(validate(Example{"1", "Departure", "Arrival"}));
  EXPECT_THROW(validate(Example{"1", " ", "Arrival"}), PreconditionError);
  EXPECT_THROW(validate(Example{"1", "Departure", ""}), PreconditionError);
  EXPECT_THROW(validate_unique_ids({{"x", "a", "b"}, {"x", "c", "d"}}), DuplicateId);
}

TEST(TaskSpecTest, RequiresBothSplitsAndDisjointIds) {
  TaskSpec t;
  t.name = "antonyms";
  t.description = "antonyms";
  t.train = {{"a", "hot", "cold"}};
  EXPECT_THROW(validate(t), PreconditionError);
  t.test = {{"a", "up", "down"}};
  EXPECT_THROW(validate(t), DuplicateId);
  t.test = {{"b", "up", "down"}};
  EXPECT_NO_THROW(validate(t));
}

TEST(PromptTest, ChildPromptRecordsLineage) {
  const Prompt root = make_root_prompt("p0", "Get antonym");
  const Prompt child = make_child_prompt(root, "t1-c0", "Give the antonym.", PromptOrigin::author_edit);
  EXPECT_EQ(child.iteration, 1);
  EXPECT_EQ(child.parent, std::optional<std::string>("p0"));
  EXPECT_TRUE(root.is_root());
  EXPECT_FALSE(child.is_root());
  Prompt orphan = child;
  orphan.parent.reset();
  EXPECT_THROW(validate(orphan), PreconditionError);
}

TEST(EditRecordTest, EmptySummaryBecomesUnstructured) {
  EXPECT_EQ(make_edit("  ", "t1-c0", 1).summary, "(unstructured edit)");
  EXPECT_EQ(make_edit("added examples", "t1-c0", 1).summary, "added examples");
}

TEST(UpdateBestTest, StrictImprovementReplaces) {
  RunState s;
  s.best = BestPrompt{"p1", 0.5};
  EXPECT_EQ(update_best(s, eval_of("p2", 5, 0.7)).best, (BestPrompt{"p2", 0.7}));
}

TEST(UpdateBestTest, TieKeepsIncumbent) {
  RunState s;
  s.best = BestPrompt{"p1", 0.5};
  EXPECT_EQ(update_best(s, eval_of("p2", 5, 0.5)).best, (BestPrompt{"p1", 0.5}));
}

TEST(UpdateBestTest, WorseKeepsIncumbent) {
  RunState s;
  s.best = BestPrompt{"p1", 0.5};
  EXPECT_EQ(update_best(s, eval_of("p2", 5, 0.3)).best, (BestPrompt{"p1", 0.5}));
}

TEST(UpdateBestTest, FirstEvaluationBecomesBestAndUnmeasuredIsRejected) {
  EXPECT_EQ(update_best(RunState{}, eval_of("p1", 5, 0.0)).best, (BestPrompt{"p1", 0.0}));
  EXPECT_THROW(update_best(RunState{}, eval_of("p1", 5, std::nullopt)), PreconditionError);
}

CandidateOutcome outcome(const std::string& id, double score, std::optional<double> acc) {
  return {make_edit("edit " + id, id, 1), "text " + id, Score(score), acc, true};
}

TEST(AppendMemoriesTest, EveryScoredCandidateEntersAuthorMemory) {
  const RunState s = append_memories(
      RunState{}, {outcome("a", 3, std::nullopt), outcome("b", 5, std::nullopt),
                   outcome("c", 7, std::nullopt)},
      std::nullopt);
  EXPECT_EQ(s.author_memory.size(), 3u);
  EXPECT_TRUE(s.reviewer_memory.empty());
}

TEST(AppendMemoriesTest, CapKeepsNewest) {
  RunState s;
  for (const char* id : {"a", "b", "c"}) s = append_memories(s, {outcome(id, 5, 0.5)}, 2);
  ASSERT_EQ(s.author_memory.size(), 2u);
  EXPECT_EQ(s.author_memory[0].edit.produced_prompt, "b");
  EXPECT_EQ(s.author_memory[1].edit.produced_prompt, "c");
  ASSERT_EQ(s.reviewer_memory.size(), 2u);
  EXPECT_EQ(s.reviewer_memory[1].prompt_text, "text c");
}

TEST(AppendMemoriesTest, OnlyEvaluatedSurvivorsEnterReviewerMemory) {
  const RunState s =
      append_memories(RunState{}, {outcome("a", 8, 0.75), outcome("b", 4, std::nullopt)},
                      std::nullopt);
  ASSERT_EQ(s.reviewer_memory.size(), 1u);
  EXPECT_EQ(s.reviewer_memory[0].task_accuracy, 0.75);
  EXPECT_EQ(s.author_memory.size(), 2u);
}

TEST(AppendMemoriesTest, CarriedInPromptAndAblationSkipAuthorMemory) {
  CandidateOutcome initial = outcome("p0", 6, 0.5);
  initial.author_generated = false;
  EXPECT_TRUE(append_memories(RunState{}, {initial}, std::nullopt).author_memory.empty());
  EXPECT_TRUE(
      append_memories(RunState{}, {outcome("a", 6, 0.5)}, std::nullopt, false).author_memory.empty());
}

TEST(RunConfigTest, ValidationBounds) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  c.top_n = 5;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.hard_fraction = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.iterations = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.memory_cap = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(BackendConfigTest, ValidationBounds) {
  BackendConfig b;
  EXPECT_THROW(validate(b), ConfigError);
  b.script_path = "s.jsonl";
  EXPECT_NO_THROW(validate(b));
  b.kind = BackendKind::http;
  EXPECT_THROW(validate(b), ConfigError);
  b.endpoint = "http://localhost:1/v1/chat/completions";
  b.model = "m";
  EXPECT_NO_THROW(validate(b));
  b.requests_per_minute = 0;
  EXPECT_THROW(validate(b), ConfigError);
}

TEST(EnumTest, ParseRoundTrips) {
  for (auto s : {SelectionStrategy::hard, SelectionStrategy::random, SelectionStrategy::easy,
                 SelectionStrategy::all})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  for (auto m : {MetricKind::exact_match, MetricKind::contains_gold, MetricKind::multiple_choice,
                 MetricKind::binary_label})
    EXPECT_EQ(parse_metric(to_string(m)), m);
  EXPECT_EQ(parse_mode("paraphrase_only"), RunMode::paraphrase_only);
  EXPECT_THROW(parse_strategy("hardest"), ConfigError);
  EXPECT_THROW(parse_metric("bleu"), ConfigError);
}

TEST(FlagTest, LogLineFormat) {
  EXPECT_EQ(flag_log_line({"selector_fallback", 2, "example=a03 imputed=6"}),
            "FLAG selector_fallback iteration=2 example=a03 imputed=6");
}

TEST(TextTest, WhitespaceHelpers) {
  EXPECT_EQ(collapse_whitespace("  a \t b\n\nc  "), "a b c");
  EXPECT_EQ(trim("\t x y \n"), "x y");
  EXPECT_EQ(split_whitespace(" a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(join({"a", "b"}, ", "), "a, b");
  EXPECT_EQ(lowercase("MiXeD"), "mixed");
}

TEST(TemplateTest, SinglePassSubstitution) {
  EXPECT_EQ(fill_template("A {x} B {y}", {{"x", "{y}"}, {"y", "1"}}), "A {y} B 1");
  EXPECT_EQ(fill_template("{x}", {{"x", ""}}), "");
  EXPECT_EQ(fill_template("keep {unknown}", {{"x", "1"}}), "keep {unknown}");
}

TEST(NumberFormatTest, ShortestAndPercent) {
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(format_number(7.0), "7");
  EXPECT_EQ(format_percent(0.85), "85");
  EXPECT_EQ(format_percent(0.125), "12.5");
  EXPECT_EQ(format_percent(1.0), "100");
  EXPECT_EQ(ceil_fraction(0.6, 10), 6u);
  EXPECT_EQ(ceil_fraction(0.6, 11), 7u);
  EXPECT_EQ(ceil_fraction(0.5, 3), 2u);
}

TEST(RngTest, SeededStreamsAreReproducibleAndBounded) {
  Rng a(7), b(7), c(8);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 16; ++i) {
    xa.push_back(a.next());
    xb.push_back(b.next());
    xc.push_back(c.next());
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const double u = r.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const auto idx = Rng(3).sample_indices(10, 4);
  EXPECT_EQ(idx.size(), 4u);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 4u);
  EXPECT_NE(derive_seed(1, 1), derive_seed(1, 2));
}

TEST(ParallelMapTest, KeepsIndexOrderAtAnyWidth) {
  for (std::size_t width : {1u, 2u, 8u}) {
    const auto out = parallel_map(50, width, [](std::size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 50u);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  }
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(ParallelMapTest, RethrowsLowestFailingIndex) {
  try {
    parallel_map(20, 4, [](std::size_t i) -> int {
      if (i == 5 || i == 12) throw std::runtime_error("fail " + std::to_string(i));
      return 0;
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 5");
  }
}

}  // namespace
}  // namespace evoke
