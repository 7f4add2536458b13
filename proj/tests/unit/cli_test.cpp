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

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "evoke/evoke.hpp"
#include "support/test_support.hpp"

#ifndef EVOKE_CLI_PATH
#error "EVOKE_CLI_PATH must point at the evoke executable"
#endif

namespace evoke {
namespace {

using testing::TempDir;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

CliResult cli(const std::string& args) {
  const std::string cmd = quote(EVOKE_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return quote((testing::antonyms_dir() / name).string());
}

TEST(CliTest, RunWritesReportFiles) {
  TempDir dir;
  const auto r = cli("run --task " + fixture("task.json") + " --backend " +
                     fixture("backend.json") + " --out " + quote(dir.path().string()) + " --quiet");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("best prompt: t3-c1"), std::string::npos) << r.output;
  for (const char* f : {"report.json", "iterations.csv", "score_accuracy.csv", "best_prompt.txt",
                        "state.json", "run.log"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(load_report(dir / "report.json").best_prompt.id, "t3-c1");
}

TEST(CliTest, PausedRunResumesAndReportReemits) {
  TempDir dir;
  const std::string out = quote(dir.path().string());
  auto r = cli("run --task " + fixture("task.json") + " --backend " + fixture("backend.json") +
               " --out " + out + " --stop-after 1 --quiet");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("status: paused"), std::string::npos) << r.output;
  r = cli("resume --state " + quote((dir / "state.json").string()) + " --quiet");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("status: completed"), std::string::npos) << r.output;

  TempDir again;
  r = cli("report --state " + quote((dir / "state.json").string()) + " --out " +
          quote(again.path().string()));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(read_file(again / "iterations.csv"), read_file(dir / "iterations.csv"));
}

TEST(CliTest, AttackOutputSatisfiesConstraints) {
  TempDir dir;
  const auto out = dir / "attacked.jsonl";
  const auto r = cli("attack --in " + fixture("antonyms.jsonl") + " --out " +
                     quote(out.string()) + " --seed 9");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto original = load_dataset(testing::antonyms_dir() / "antonyms.jsonl");
  const auto attacked = load_dataset(out);
  ASSERT_EQ(original.size(), attacked.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    EXPECT_EQ(original[i].id + "-adv", attacked[i].id);
    EXPECT_TRUE(verify_example_attack(original[i], attacked[i])) << original[i].input;
  }
}

TEST(CliTest, EvalReportsAccuracy) {
  TempDir dir;
  write_file_atomic(dir / "prompt.txt",
                    "Give the antonym of the input word. Revision base. Rigor level 5.\n");
  const auto r = cli("eval --prompt " + quote((dir / "prompt.txt").string()) + " --dataset " +
                     fixture("antonyms.jsonl") + " --metric exact_match --backend " +
                     fixture("backend.json"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("accuracy: 1 (12/12)"), std::string::npos) << r.output;
}

TEST(CliTest, UnknownFlagIsUsageError) {
  const auto r = cli("run --bogus");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("Usage"), std::string::npos) << r.output;
  EXPECT_EQ(cli("").exit_code, 1);
}

TEST(CliTest, MissingFileIsRuntimeError) {
  TempDir dir;
  const auto r = cli("run --task " + quote((dir / "nope.json").string()) + " --backend " +
                     fixture("backend.json") + " --out " + quote(dir.path().string()));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("error:"), std::string::npos) << r.output;
}

}  // namespace
}  // namespace evoke
