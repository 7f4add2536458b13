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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evoke/backend_config.hpp"
#include "evoke/errors.hpp"
#include "evoke/util.hpp"

namespace evoke {

// Reviewer and selector scale. Halves and other fractions are allowed.
class Score {
 public:
  static constexpr double kMin = 1.0;
  static constexpr double kMax = 10.0;

  explicit Score(double value) : value_(value) {
    if (!(value >= kMin && value <= kMax))
      throw PreconditionError("score outside [1,10]: " + format_number(value));
  }

  double value() const { return value_; }
  std::string str() const { return format_number(value_); }

  friend bool operator==(Score a, Score b) { return a.value_ == b.value_; }
  friend auto operator<=>(Score a, Score b) { return a.value_ <=> b.value_; }

 private:
  double value_;
};

// Checks that `v` is a fraction in [0, 1].
inline double checked_fraction(double v, std::string_view what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw PreconditionError(std::string(what) + " outside [0,1]: " +
                            format_number(v));
  return v;
}

struct Example {
  std::string id;
  std::string input;
  std::string gold_output;

  friend bool operator==(const Example&, const Example&) = default;
};

inline void validate(const Example& ex) {
  if (trim_view(ex.input).empty())
    throw PreconditionError("example " + ex.id + ": empty input");
  if (trim_view(ex.gold_output).empty())
    throw PreconditionError("example " + ex.id + ": empty output");
}

inline void validate_unique_ids(const std::vector<Example>& examples) {
  std::set<std::string> seen;
  for (const auto& ex : examples)
    if (!seen.insert(ex.id).second) throw DuplicateId("duplicate id: " + ex.id);
}

enum class MetricKind { exact_match, contains_gold, multiple_choice, binary_label };

inline std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::exact_match: return "exact_match";
    case MetricKind::contains_gold: return "contains_gold";
    case MetricKind::multiple_choice: return "multiple_choice";
    case MetricKind::binary_label: return "binary_label";
  }
  return "?";
}

inline MetricKind parse_metric(std::string_view s) {
  if (s == "exact_match") return MetricKind::exact_match;
  if (s == "contains_gold") return MetricKind::contains_gold;
  if (s == "multiple_choice") return MetricKind::multiple_choice;
  if (s == "binary_label") return MetricKind::binary_label;
  throw ConfigError("unknown metric: " + std::string(s));
}

// Surface token -> canonical label, for binary_label grading. Keys are
// matched against normalized predictions.
using LabelAliases = std::map<std::string, std::string>;

inline LabelAliases default_label_aliases() {
  return {{"0", "0"},
          {"1", "1"},
          {"yes", "yes"},
          {"no", "no"},
          {"true", "true"},
          {"false", "false"},
          {"entailment", "entailment"},
          {"non-entailment", "non-entailment"},
          {"contradiction", "contradiction"},
          {"neutral", "neutral"}};
}

struct TaskSpec {
  std::string name;
  std::string description;
  MetricKind metric = MetricKind::exact_match;
  LabelAliases aliases = default_label_aliases();
  std::vector<Example> train;
  std::vector<Example> test;
};

inline void validate(const TaskSpec& task) {
  if (task.train.empty()) throw PreconditionError("task has no training examples");
  if (task.test.empty()) throw PreconditionError("task has no test examples");
  std::set<std::string> train_ids;
  for (const auto& ex : task.train) {
    validate(ex);
    if (!train_ids.insert(ex.id).second) throw DuplicateId("duplicate id: " + ex.id);
  }
  std::set<std::string> test_ids;
  for (const auto& ex : task.test) {
    validate(ex);
    if (!test_ids.insert(ex.id).second) throw DuplicateId("duplicate id: " + ex.id);
    if (train_ids.count(ex.id))
      throw DuplicateId("example " + ex.id + " is in both train and test");
  }
}

enum class PromptOrigin { initial, induced, author_edit, paraphrase };

inline std::string to_string(PromptOrigin o) {
  switch (o) {
    case PromptOrigin::initial: return "initial";
    case PromptOrigin::induced: return "induced";
    case PromptOrigin::author_edit: return "author_edit";
    case PromptOrigin::paraphrase: return "paraphrase";
  }
  return "?";
}

inline PromptOrigin parse_origin(std::string_view s) {
  if (s == "initial") return PromptOrigin::initial;
  if (s == "induced") return PromptOrigin::induced;
  if (s == "author_edit") return PromptOrigin::author_edit;
  if (s == "paraphrase") return PromptOrigin::paraphrase;
  throw ConfigError("unknown prompt origin: " + std::string(s));
}

struct Prompt {
  std::string id;
  std::string text;
  int iteration = 0;
  std::optional<std::string> parent;
  PromptOrigin origin = PromptOrigin::initial;

  bool is_root() const {
    return origin == PromptOrigin::initial || origin == PromptOrigin::induced;
  }

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

inline void validate(const Prompt& p) {
  if (p.iteration < 0) throw PreconditionError("prompt " + p.id + ": negative iteration");
  if ((p.iteration == 0) != p.is_root())
    throw PreconditionError("prompt " + p.id + ": iteration 0 iff initial/induced");
  if (p.parent.has_value() == p.is_root())
    throw PreconditionError("prompt " + p.id + ": parent iff edited/paraphrased");
}

inline Prompt make_root_prompt(std::string id, std::string text,
                               PromptOrigin origin = PromptOrigin::initial) {
  Prompt p{std::move(id), std::move(text), 0, std::nullopt, origin};
  validate(p);
  return p;
}

inline Prompt make_child_prompt(const Prompt& parent, std::string id,
                                std::string text, PromptOrigin origin) {
  Prompt p{std::move(id), std::move(text), parent.iteration + 1, parent.id, origin};
  validate(p);
  return p;
}

struct EditRecord {
  std::string summary;
  std::string produced_prompt;
  int iteration = 0;

  friend bool operator==(const EditRecord&, const EditRecord&) = default;
};

inline EditRecord make_edit(std::string summary, std::string produced_prompt,
                            int iteration) {
  if (trim_view(summary).empty()) summary = "(unstructured edit)";
  return {std::move(summary), std::move(produced_prompt), iteration};
}

struct AuthorMemoryEntry {
  EditRecord edit;
  Score reviewer_score{Score::kMin};

  friend bool operator==(const AuthorMemoryEntry&, const AuthorMemoryEntry&) = default;
};

struct ReviewerMemoryEntry {
  EditRecord edit;
  std::string prompt_text;
  double task_accuracy = 0.0;

  friend bool operator==(const ReviewerMemoryEntry&, const ReviewerMemoryEntry&) = default;
};

struct CandidateEvaluation {
  std::string prompt;
  Score reviewer_score{Score::kMin};
  std::optional<double> task_accuracy;
  int iteration = 0;

  friend bool operator==(const CandidateEvaluation&, const CandidateEvaluation&) = default;
};

enum class SelectionStrategy { hard, random, easy, all };

inline std::string to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::hard: return "hard";
    case SelectionStrategy::random: return "random";
    case SelectionStrategy::easy: return "easy";
    case SelectionStrategy::all: return "all";
  }
  return "?";
}

inline SelectionStrategy parse_strategy(std::string_view s) {
  if (s == "hard") return SelectionStrategy::hard;
  if (s == "random") return SelectionStrategy::random;
  if (s == "easy") return SelectionStrategy::easy;
  if (s == "all") return SelectionStrategy::all;
  throw ConfigError("unknown selection strategy: " + std::string(s));
}

enum class RunMode { evoke, paraphrase_only };

inline std::string to_string(RunMode m) {
  return m == RunMode::evoke ? "evoke" : "paraphrase_only";
}

inline RunMode parse_mode(std::string_view s) {
  if (s == "evoke") return RunMode::evoke;
  if (s == "paraphrase_only" || s == "paraphrase") return RunMode::paraphrase_only;
  throw ConfigError("unknown mode: " + std::string(s));
}

// Decoding parameters per role. Generation roles sample, judging roles don't.
struct Sampling {
  double author_temperature = 0.9;
  double paraphrase_temperature = 0.9;
  double induction_temperature = 0.9;
  double reviewer_temperature = 0.0;
  double selector_temperature = 0.0;
  double task_eval_temperature = 0.0;
  int author_max_tokens = 2048;
  int judge_max_tokens = 256;
  int task_max_tokens = 512;

  friend bool operator==(const Sampling&, const Sampling&) = default;
};

struct RunConfig {
  int iterations = 3;       // T
  int candidates = 4;       // m
  int top_n = 2;
  double hard_fraction = 0.5;
  SelectionStrategy strategy = SelectionStrategy::hard;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::evoke;
  BackendConfig backend;
  std::optional<std::size_t> memory_cap;
  std::size_t error_pair_cap = 8;
  std::optional<std::uint64_t> max_total_calls;
  std::size_t parallelism = 4;
  Sampling sampling;
};

inline void validate(const RunConfig& c) {
  if (c.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (c.candidates < 1) throw ConfigError("candidates must be >= 1");
  if (c.top_n < 1 || c.top_n > c.candidates)
    throw ConfigError("top_n must satisfy 1 <= top_n <= candidates");
  if (!(c.hard_fraction > 0.0 && c.hard_fraction <= 1.0))
    throw ConfigError("hard_fraction must be in (0,1]");
  if (c.error_pair_cap < 1) throw ConfigError("error_pair_cap must be >= 1");
  if (c.memory_cap && *c.memory_cap < 1) throw ConfigError("memory_cap must be >= 1");
  if (c.backend.max_retries < 0) throw ConfigError("max_retries must be >= 0");
}

struct BestPrompt {
  std::string prompt;
  double accuracy = 0.0;

  friend bool operator==(const BestPrompt&, const BestPrompt&) = default;
};

struct RunState {
  int t = 0;  // last completed iteration
  std::vector<AuthorMemoryEntry> author_memory;
  std::vector<ReviewerMemoryEntry> reviewer_memory;
  std::vector<Prompt> pool;
  std::vector<CandidateEvaluation> history;
  std::optional<BestPrompt> best;

  friend bool operator==(const RunState&, const RunState&) = default;
};

// Replaces best only on strict improvement; ties keep the incumbent.
inline RunState update_best(RunState state, const CandidateEvaluation& eval) {
  if (!eval.task_accuracy)
    throw PreconditionError("update_best needs a measured task accuracy");
  const double acc = *eval.task_accuracy;
  if (!state.best || acc > state.best->accuracy) state.best = BestPrompt{eval.prompt, acc};
  return state;
}

// One reviewed candidate of one iteration, as fed to append_memories.
struct CandidateOutcome {
  EditRecord edit;
  std::string prompt_text;
  Score reviewer_score{Score::kMin};
  std::optional<double> task_accuracy;
  bool author_generated = true;  // false for the carried-in initial prompt
};

template <typename T>
void cap_front(std::vector<T>& v, std::optional<std::size_t> cap) {
  if (cap && v.size() > *cap)
    v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() - *cap));
}

inline RunState append_memories(RunState state,
                                const std::vector<CandidateOutcome>& outcomes,
                                std::optional<std::size_t> memory_cap,
                                bool record_author_memory = true) {
  for (const auto& o : outcomes) {
    if (record_author_memory && o.author_generated)
      state.author_memory.push_back({o.edit, o.reviewer_score});
    if (o.task_accuracy)
      state.reviewer_memory.push_back(
          {o.edit, o.prompt_text, checked_fraction(*o.task_accuracy, "task accuracy")});
  }
  cap_front(state.author_memory, memory_cap);
  cap_front(state.reviewer_memory, memory_cap);
  return state;
}

// Run-log events that the report must surface.
struct Flag {
  std::string kind;
  int iteration = 0;
  std::string detail;

  friend bool operator==(const Flag&, const Flag&) = default;
};

inline std::string flag_log_line(const Flag& f) {
  return "FLAG " + f.kind + " iteration=" + std::to_string(f.iteration) + " " + f.detail;
}

}  // namespace evoke
