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

#include <fstream>
#include <set>

#include "evoke/evoke.hpp"
#include "support/test_support.hpp"

namespace evoke {
namespace {

using testing::TempDir;

std::vector<Example> numbered(std::size_t n) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({"e" + std::to_string(i), "in" + std::to_string(i), "out"});
  return out;
}

TEST(DatasetTest, ParsesRecordAndDefaultsIdToLine) {
  const auto d = parse_dataset("{\"input\":\"Departure\",\"output\":\"Arrival\"}\n\n"
                               "{\"id\":7,\"input\":\"hot\",\"output\":\"cold\"}\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].input, "Departure");
  EXPECT_EQ(d[0].gold_output, "Arrival");
  EXPECT_EQ(d[0].id, "1");
  EXPECT_EQ(d[1].id, "7");
}

TEST(DatasetTest, Errors) {
  EXPECT_THROW(parse_dataset(""), EmptyDataset);
  EXPECT_THROW(parse_dataset("{\"id\":\"x\",\"input\":\"a\",\"output\":\"b\"}\n"
                             "{\"id\":\"x\",\"input\":\"c\",\"output\":\"d\"}"),
               DuplicateId);
  try {
    parse_dataset("{\"input\":\"a\",\"output\":\"b\"}\n{\"input\":\"a\"}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_dataset("not json"), ParseError);
  EXPECT_THROW(load_dataset("/nonexistent/evoke.jsonl"), IoError);
}

TEST(DatasetTest, SaveLoadRoundTrip) {
  TempDir dir;
  const std::vector<Example> d = {{"a", "tab\tseparated", "x"}, {"b", "quote \"q\"", "y"}};
  save_dataset(d, dir / "d.jsonl");
  EXPECT_EQ(load_dataset(dir / "d.jsonl"), d);
}

TEST(SplitTest, SizesAndDeterminism) {
  const auto s = split_dataset(numbered(10), 0.6, 1);
  EXPECT_EQ(s.train.size(), 6u);
  EXPECT_EQ(s.test.size(), 4u);
  const auto again = split_dataset(numbered(10), 0.6, 1);
  EXPECT_EQ(s.train, again.train);
  EXPECT_EQ(s.test, again.test);
  const auto odd = split_dataset(numbered(3), 0.5, 1);
  EXPECT_EQ(odd.train.size(), 2u);
  EXPECT_EQ(odd.test.size(), 1u);
  EXPECT_THROW(split_dataset(numbered(1), 0.6, 1), TooFewExamples);
  EXPECT_THROW(split_dataset(numbered(4), 1.0, 1), PreconditionError);
}

TEST(TaskConfigTest, FixtureLoads) {
  const TaskConfig tc = load_task_config(testing::antonyms_dir() / "task.json");
  EXPECT_EQ(tc.task.name, "antonyms");
  EXPECT_EQ(tc.task.train.size(), 8u);
  EXPECT_EQ(tc.task.test.size(), 4u);
  ASSERT_TRUE(tc.run);
  EXPECT_EQ(tc.run->iterations, 3);
  EXPECT_EQ(tc.run->candidates, 4);
  EXPECT_EQ(tc.run->top_n, 2);
  ASSERT_TRUE(tc.initial_prompt);
}

TEST(TaskConfigTest, ExplicitSplitsInductionAndErrors) {
  TempDir dir;
  save_dataset({{"a", "hot", "cold"}}, dir / "train.jsonl");
  save_dataset({{"b", "up", "down"}}, dir / "test.jsonl");
  write_file_atomic(dir / "t.json",
                    R"({"name":"t","metric":"binary_label","train":"train.jsonl",)"
                    R"("test":"test.jsonl","induce":{"k":3},"aliases":{"yes":"1","no":"0"}})");
  const TaskConfig tc = load_task_config(dir / "t.json");
  EXPECT_EQ(tc.task.metric, MetricKind::binary_label);
  EXPECT_EQ(tc.induce_k, std::optional<int>(3));
  EXPECT_EQ(tc.task.aliases.at("yes"), "1");
  EXPECT_EQ(tc.task.description, "t");
  write_file_atomic(dir / "bad.json", R"({"name":"t","train":"train.jsonl","test":"test.jsonl"})");
  EXPECT_THROW(load_task_config(dir / "bad.json"), ConfigError);
  write_file_atomic(dir / "broken.json", "{");
  EXPECT_THROW(load_task_config(dir / "broken.json"), ConfigError);
}

TEST(BackendConfigFileTest, ResolvesScriptRelativeToFile) {
  const BackendFile bf = load_backend_config(testing::antonyms_dir() / "backend.json");
  EXPECT_EQ(bf.backend.kind, BackendKind::scripted);
  ASSERT_TRUE(bf.backend.script_path);
  EXPECT_TRUE(std::filesystem::exists(*bf.backend.script_path));
  EXPECT_EQ(bf.parallelism, std::optional<std::size_t>(4));
}

TEST(BackendConfigFileTest, HttpFieldsAndFaults) {
  TempDir dir;
  write_file_atomic(dir / "b.json",
                    R"({"kind":"http","endpoint":"http://localhost:9/v1","model":"m",)"
                    R"("requests_per_minute":30,"faults":{"mode":"transient","rate":0.2}})");
  const BackendFile bf = load_backend_config(dir / "b.json");
  EXPECT_EQ(bf.backend.kind, BackendKind::http);
  EXPECT_EQ(bf.backend.requests_per_minute, std::optional<int>(30));
  ASSERT_TRUE(bf.backend.faults);
  EXPECT_EQ(bf.backend.faults->mode, FaultMode::transient);
  write_file_atomic(dir / "c.json", R"({"kind":"carrier-pigeon"})");
  EXPECT_THROW(load_backend_config(dir / "c.json"), ConfigError);
}

RunReport fixture_report() { return testing::run_antonyms(testing::load_antonyms()); }

TEST(ReportJsonTest, RoundTripsExactly) {
  const RunReport r = fixture_report();
  const Json j = r;
  const RunReport back = j.get<RunReport>();
  EXPECT_TRUE(back == r);
  EXPECT_EQ(Json(back).dump(), j.dump());
}

TEST(ReportJsonTest, CheckpointRoundTripsThroughFile) {
  TempDir dir;
  testing::run_antonyms(testing::load_antonyms(), dir.path());
  const Checkpoint c = load_checkpoint(dir / "state.json");
  save_checkpoint(c, dir / "copy.json");
  EXPECT_EQ(read_file(dir / "state.json"), read_file(dir / "copy.json"));
  EXPECT_EQ(c.status, "completed");
}

TEST(ReportJsonTest, TimingFieldsAreExcludedFromComparison) {
  RunReport a = fixture_report();
  RunReport b = a;
  b.stats.wall_clock_ms += 123;
  b.stats.started_at = "2000-01-01T00:00:00Z";
  EXPECT_EQ(report_json_without_timing(a), report_json_without_timing(b));
  b.stats.calls += 1;
  EXPECT_NE(report_json_without_timing(a), report_json_without_timing(b));
}

TEST(IterationsCsvTest, OneRowPerSurvivorPerIteration) {
  const RunReport r = fixture_report();
  const auto rows = testing::parse_iterations_csv(iterations_csv(r));
  std::size_t survivors = 0;
  for (const auto& it : r.iterations) survivors += it.survivors.size();
  EXPECT_EQ(rows.size(), survivors);
  EXPECT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows.front().iteration, 1);
  EXPECT_EQ(rows.back().iteration, 3);
}

TEST(CsvTest, QuotesFieldsWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(ScoreAccuracyCsvTest, OneRowPerEvaluatedSurvivor) {
  const RunReport r = fixture_report();
  const auto lines = split(score_accuracy_csv(r), '\n');
  EXPECT_EQ(lines.front(), "reviewer_score,task_accuracy");
  EXPECT_EQ(r.score_accuracy.size(), 6u);
  EXPECT_EQ(lines.size(), 1 + 6 + 1u);
}

TEST(LoadCheckpointTest, TruncatedFileIsStateCorrupt) {
  TempDir dir;
  testing::run_antonyms(testing::load_antonyms(), dir.path());
  const std::string text = read_file(dir / "state.json");
  write_file_atomic(dir / "cut.json", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(dir / "cut.json"), StateCorrupt);
  EXPECT_THROW(load_checkpoint(dir / "missing.json"), StateCorrupt);
  Json j = Json::parse(text);
  j["state"]["t"] = 7;
  write_file_atomic(dir / "bad_t.json", j.dump());
  EXPECT_THROW(load_checkpoint(dir / "bad_t.json"), StateCorrupt);
}

TEST(WriteFileAtomicTest, ReplacesContentAndLeavesNoTemp) {
  TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 1u);
}

}  // namespace
}  // namespace evoke
