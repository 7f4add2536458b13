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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoke/backend_config.hpp"
#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/selector.hpp"
#include "evoke/util.hpp"

// Persistence formats: canonical JSON for every core type, the run report,
// the resumable checkpoint, and the plot-ready CSV tables.
namespace evoke {

using Json = nlohmann::ordered_json;

// ---- per-iteration tables --------------------------------------------------

struct CandidateRow {
  std::string prompt;
  std::string edit_summary;
  double reviewer_score = Score::kMin;
  bool unratable = false;
  bool survived = false;
  std::optional<double> subset_accuracy;
  // Best subset accuracy of the run right after this survivor was considered.
  std::optional<double> best_so_far;

  friend bool operator==(const CandidateRow&, const CandidateRow&) = default;
};

struct IterationRecord {
  int iteration = 0;
  std::string incumbent;
  std::optional<double> incumbent_accuracy;
  std::vector<DifficultyRating> ratings;
  std::vector<std::string> subset;
  std::size_t error_pairs = 0;
  std::vector<CandidateRow> candidates;  // review order
  std::vector<std::string> survivors;    // top-n order
  std::optional<BestPrompt> best_after;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct RunStats {
  std::uint64_t calls = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  // Timing fields; excluded from determinism comparisons.
  std::int64_t wall_clock_ms = 0;
  std::string started_at;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct RunReport {
  RunConfig config;
  std::string task_name;
  std::string status = "completed";
  std::vector<IterationRecord> iterations;
  std::vector<std::pair<double, double>> score_accuracy;
  Prompt best_prompt;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  RunState state;
  std::vector<Prompt> prompts;
  std::vector<Flag> flags;
  RunStats stats;
};

// Everything needed to continue a run.
struct Checkpoint {
  static constexpr int kVersion = 1;
  RunConfig config;
  TaskSpec task;
  Prompt initial;
  std::vector<Prompt> prompts;
  RunState state;
  std::vector<IterationRecord> iterations;
  std::vector<Flag> flags;
  std::vector<std::string> log;
  RunStats stats;
  std::string status = "running";
  std::optional<double> test_accuracy;
};

// ---- JSON helpers ----------------------------------------------------------

template <typename T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

inline Score score_at(const Json& j, const char* key) {
  return Score(j.at(key).get<double>());
}

// ---- core types ------------------------------------------------------------

inline void to_json(Json& j, const Example& e) {
  j = Json{{"id", e.id}, {"input", e.input}, {"output", e.gold_output}};
}
inline void from_json(const Json& j, Example& e) {
  e.id = j.at("id").get<std::string>();
  e.input = j.at("input").get<std::string>();
  e.gold_output = j.at("output").get<std::string>();
}

inline void to_json(Json& j, const Prompt& p) {
  j = Json{{"id", p.id},
           {"text", p.text},
           {"iteration", p.iteration},
           {"parent", opt_json(p.parent)},
           {"origin", to_string(p.origin)}};
}
inline void from_json(const Json& j, Prompt& p) {
  p.id = j.at("id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  p.iteration = j.at("iteration").get<int>();
  p.parent = opt_get<std::string>(j, "parent");
  p.origin = parse_origin(j.at("origin").get<std::string>());
  validate(p);
}

inline void to_json(Json& j, const EditRecord& e) {
  j = Json{{"summary", e.summary}, {"produced_prompt", e.produced_prompt},
           {"iteration", e.iteration}};
}
inline void from_json(const Json& j, EditRecord& e) {
  e.summary = j.at("summary").get<std::string>();
  e.produced_prompt = j.at("produced_prompt").get<std::string>();
  e.iteration = j.at("iteration").get<int>();
}

inline void to_json(Json& j, const AuthorMemoryEntry& e) {
  j = Json{{"edit", e.edit}, {"reviewer_score", e.reviewer_score.value()}};
}
inline void from_json(const Json& j, AuthorMemoryEntry& e) {
  e.edit = j.at("edit").get<EditRecord>();
  e.reviewer_score = score_at(j, "reviewer_score");
}

inline void to_json(Json& j, const ReviewerMemoryEntry& e) {
  j = Json{{"edit", e.edit}, {"prompt_text", e.prompt_text}, {"task_accuracy", e.task_accuracy}};
}
inline void from_json(const Json& j, ReviewerMemoryEntry& e) {
  e.edit = j.at("edit").get<EditRecord>();
  e.prompt_text = j.at("prompt_text").get<std::string>();
  e.task_accuracy = checked_fraction(j.at("task_accuracy").get<double>(), "task_accuracy");
}

inline void to_json(Json& j, const CandidateEvaluation& e) {
  j = Json{{"prompt", e.prompt},
           {"reviewer_score", e.reviewer_score.value()},
           {"task_accuracy", opt_json(e.task_accuracy)},
           {"iteration", e.iteration}};
}
inline void from_json(const Json& j, CandidateEvaluation& e) {
  e.prompt = j.at("prompt").get<std::string>();
  e.reviewer_score = score_at(j, "reviewer_score");
  e.task_accuracy = opt_get<double>(j, "task_accuracy");
  e.iteration = j.at("iteration").get<int>();
}

inline void to_json(Json& j, const BestPrompt& b) {
  j = Json{{"prompt", b.prompt}, {"accuracy", b.accuracy}};
}
inline void from_json(const Json& j, BestPrompt& b) {
  b.prompt = j.at("prompt").get<std::string>();
  b.accuracy = j.at("accuracy").get<double>();
}

inline void to_json(Json& j, const RunState& s) {
  j = Json{{"t", s.t},
           {"author_memory", s.author_memory},
           {"reviewer_memory", s.reviewer_memory},
           {"pool", s.pool},
           {"history", s.history},
           {"best", opt_json(s.best)}};
}
inline void from_json(const Json& j, RunState& s) {
  s.t = j.at("t").get<int>();
  s.author_memory = j.at("author_memory").get<std::vector<AuthorMemoryEntry>>();
  s.reviewer_memory = j.at("reviewer_memory").get<std::vector<ReviewerMemoryEntry>>();
  s.pool = j.at("pool").get<std::vector<Prompt>>();
  s.history = j.at("history").get<std::vector<CandidateEvaluation>>();
  s.best = opt_get<BestPrompt>(j, "best");
}

inline void to_json(Json& j, const Flag& f) {
  j = Json{{"kind", f.kind}, {"iteration", f.iteration}, {"detail", f.detail}};
}
inline void from_json(const Json& j, Flag& f) {
  f.kind = j.at("kind").get<std::string>();
  f.iteration = j.at("iteration").get<int>();
  f.detail = j.at("detail").get<std::string>();
}

inline void to_json(Json& j, const DifficultyRating& r) {
  j = Json{{"example", r.example}, {"score", r.score.value()},
           {"raw_response", r.raw_response}, {"fallback", r.fallback}};
}
inline void from_json(const Json& j, DifficultyRating& r) {
  r.example = j.at("example").get<std::string>();
  r.score = score_at(j, "score");
  r.raw_response = j.at("raw_response").get<std::string>();
  r.fallback = j.at("fallback").get<bool>();
}

// ---- configuration ---------------------------------------------------------

inline std::string to_string(FaultMode m) {
  switch (m) {
    case FaultMode::mixed: return "mixed";
    case FaultMode::transient: return "transient";
    case FaultMode::empty: return "empty";
  }
  return "?";
}

inline FaultMode parse_fault_mode(std::string_view s) {
  if (s == "mixed") return FaultMode::mixed;
  if (s == "transient") return FaultMode::transient;
  if (s == "empty") return FaultMode::empty;
  throw ConfigError("unknown fault mode: " + std::string(s));
}

inline void to_json(Json& j, const FaultInjection& f) {
  j = Json{{"mode", to_string(f.mode)},
           {"rate", f.rate},
           {"seed", f.seed},
           {"max_consecutive", f.max_consecutive},
           {"only_tag", opt_json(f.only_tag)}};
}
inline void from_json(const Json& j, FaultInjection& f) {
  f = FaultInjection{};
  if (j.contains("mode")) f.mode = parse_fault_mode(j.at("mode").get<std::string>());
  f.rate = j.value("rate", 0.0);
  f.seed = j.value("seed", std::uint64_t{0});
  f.max_consecutive = j.value("max_consecutive", 2);
  f.only_tag = opt_get<std::string>(j, "only_tag");
  if (!(f.rate >= 0.0 && f.rate <= 1.0)) throw ConfigError("fault rate must be in [0,1]");
}

inline void to_json(Json& j, const BackendConfig& c) {
  j = Json{{"kind", c.kind == BackendKind::http ? "http" : "scripted"},
           {"endpoint", c.endpoint},
           {"model", c.model},
           {"api_key_env", c.api_key_env},
           {"timeout_ms", c.timeout.count()},
           {"max_retries", c.max_retries},
           {"requests_per_minute", opt_json(c.requests_per_minute)},
           {"script_path", opt_json(c.script_path)},
           {"backoff_base_ms", c.backoff_base.count()},
           {"faults", opt_json(c.faults)}};
}
inline void from_json(const Json& j, BackendConfig& c) {
  c = BackendConfig{};
  const std::string kind = j.value("kind", std::string("scripted"));
  if (kind == "http") {
    c.kind = BackendKind::http;
  } else if (kind == "scripted") {
    c.kind = BackendKind::scripted;
  } else {
    throw ConfigError("unknown backend kind: " + kind);
  }
  c.endpoint = j.value("endpoint", std::string());
  c.model = j.value("model", std::string());
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", std::int64_t{60000}));
  c.max_retries = j.value("max_retries", 3);
  c.requests_per_minute = opt_get<int>(j, "requests_per_minute");
  c.script_path = opt_get<std::string>(j, "script_path");
  c.backoff_base = std::chrono::milliseconds(j.value("backoff_base_ms", std::int64_t{500}));
  c.faults = opt_get<FaultInjection>(j, "faults");
}

inline void to_json(Json& j, const Sampling& s) {
  j = Json{{"author_temperature", s.author_temperature},
           {"paraphrase_temperature", s.paraphrase_temperature},
           {"induction_temperature", s.induction_temperature},
           {"reviewer_temperature", s.reviewer_temperature},
           {"selector_temperature", s.selector_temperature},
           {"task_eval_temperature", s.task_eval_temperature},
           {"author_max_tokens", s.author_max_tokens},
           {"judge_max_tokens", s.judge_max_tokens},
           {"task_max_tokens", s.task_max_tokens}};
}
inline void from_json(const Json& j, Sampling& s) {
  s = Sampling{};
  s.author_temperature = j.value("author_temperature", s.author_temperature);
  s.paraphrase_temperature = j.value("paraphrase_temperature", s.paraphrase_temperature);
  s.induction_temperature = j.value("induction_temperature", s.induction_temperature);
  s.reviewer_temperature = j.value("reviewer_temperature", s.reviewer_temperature);
  s.selector_temperature = j.value("selector_temperature", s.selector_temperature);
  s.task_eval_temperature = j.value("task_eval_temperature", s.task_eval_temperature);
  s.author_max_tokens = j.value("author_max_tokens", s.author_max_tokens);
  s.judge_max_tokens = j.value("judge_max_tokens", s.judge_max_tokens);
  s.task_max_tokens = j.value("task_max_tokens", s.task_max_tokens);
}

inline void to_json(Json& j, const RunConfig& c) {
  j = Json{{"iterations", c.iterations},
           {"candidates", c.candidates},
           {"top_n", c.top_n},
           {"hard_fraction", c.hard_fraction},
           {"strategy", to_string(c.strategy)},
           {"seed", c.seed},
           {"mode", to_string(c.mode)},
           {"memory_cap", opt_json(c.memory_cap)},
           {"error_pair_cap", c.error_pair_cap},
           {"max_total_calls", opt_json(c.max_total_calls)},
           {"parallelism", c.parallelism},
           {"sampling", c.sampling},
           {"backend", c.backend}};
}
inline void from_json(const Json& j, RunConfig& c) {
  c = RunConfig{};
  c.iterations = j.value("iterations", c.iterations);
  c.candidates = j.value("candidates", c.candidates);
  c.top_n = j.value("top_n", c.top_n);
  c.hard_fraction = j.value("hard_fraction", c.hard_fraction);
  if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
  c.seed = j.value("seed", c.seed);
  if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
  c.memory_cap = opt_get<std::size_t>(j, "memory_cap");
  c.error_pair_cap = j.value("error_pair_cap", c.error_pair_cap);
  c.max_total_calls = opt_get<std::uint64_t>(j, "max_total_calls");
  c.parallelism = j.value("parallelism", c.parallelism);
  if (j.contains("sampling")) c.sampling = j.at("sampling").get<Sampling>();
  if (j.contains("backend")) c.backend = j.at("backend").get<BackendConfig>();
}

inline void to_json(Json& j, const TaskSpec& t) {
  j = Json{{"name", t.name},
           {"description", t.description},
           {"metric", to_string(t.metric)},
           {"aliases", t.aliases},
           {"train", t.train},
           {"test", t.test}};
}
inline void from_json(const Json& j, TaskSpec& t) {
  t.name = j.at("name").get<std::string>();
  t.description = j.at("description").get<std::string>();
  t.metric = parse_metric(j.at("metric").get<std::string>());
  t.aliases = j.at("aliases").get<LabelAliases>();
  t.train = j.at("train").get<std::vector<Example>>();
  t.test = j.at("test").get<std::vector<Example>>();
}

// ---- reports ---------------------------------------------------------------

inline void to_json(Json& j, const CandidateRow& r) {
  j = Json{{"prompt", r.prompt},
           {"edit_summary", r.edit_summary},
           {"reviewer_score", r.reviewer_score},
           {"unratable", r.unratable},
           {"survived", r.survived},
           {"subset_accuracy", opt_json(r.subset_accuracy)},
           {"best_so_far", opt_json(r.best_so_far)}};
}
inline void from_json(const Json& j, CandidateRow& r) {
  r.prompt = j.at("prompt").get<std::string>();
  r.edit_summary = j.at("edit_summary").get<std::string>();
  r.reviewer_score = j.at("reviewer_score").get<double>();
  r.unratable = j.at("unratable").get<bool>();
  r.survived = j.at("survived").get<bool>();
  r.subset_accuracy = opt_get<double>(j, "subset_accuracy");
  r.best_so_far = opt_get<double>(j, "best_so_far");
}

inline void to_json(Json& j, const IterationRecord& r) {
  j = Json{{"iteration", r.iteration},
           {"incumbent", r.incumbent},
           {"incumbent_accuracy", opt_json(r.incumbent_accuracy)},
           {"ratings", r.ratings},
           {"subset", r.subset},
           {"error_pairs", r.error_pairs},
           {"candidates", r.candidates},
           {"survivors", r.survivors},
           {"best_after", opt_json(r.best_after)}};
}
inline void from_json(const Json& j, IterationRecord& r) {
  r.iteration = j.at("iteration").get<int>();
  r.incumbent = j.at("incumbent").get<std::string>();
  r.incumbent_accuracy = opt_get<double>(j, "incumbent_accuracy");
  r.ratings = j.at("ratings").get<std::vector<DifficultyRating>>();
  r.subset = j.at("subset").get<std::vector<std::string>>();
  r.error_pairs = j.at("error_pairs").get<std::size_t>();
  r.candidates = j.at("candidates").get<std::vector<CandidateRow>>();
  r.survivors = j.at("survivors").get<std::vector<std::string>>();
  r.best_after = opt_get<BestPrompt>(j, "best_after");
}

inline void to_json(Json& j, const RunStats& s) {
  j = Json{{"calls", s.calls},
           {"prompt_tokens", s.prompt_tokens},
           {"completion_tokens", s.completion_tokens},
           {"wall_clock_ms", s.wall_clock_ms},
           {"started_at", s.started_at}};
}
inline void from_json(const Json& j, RunStats& s) {
  s.calls = j.at("calls").get<std::uint64_t>();
  s.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
  s.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
  s.wall_clock_ms = j.value("wall_clock_ms", std::int64_t{0});
  s.started_at = j.value("started_at", std::string());
}

inline void to_json(Json& j, const RunReport& r) {
  Json pairs = Json::array();
  for (const auto& [score, acc] : r.score_accuracy)
    pairs.push_back(Json{{"reviewer_score", score}, {"task_accuracy", acc}});
  j = Json{{"task", r.task_name},
           {"status", r.status},
           {"config", r.config},
           {"best_prompt", r.best_prompt},
           {"train_accuracy", opt_json(r.train_accuracy)},
           {"test_accuracy", opt_json(r.test_accuracy)},
           {"iterations", r.iterations},
           {"score_accuracy", pairs},
           {"state", r.state},
           {"prompts", r.prompts},
           {"flags", r.flags},
           {"stats", r.stats}};
}
inline void from_json(const Json& j, RunReport& r) {
  r.task_name = j.at("task").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.config = j.at("config").get<RunConfig>();
  r.best_prompt = j.at("best_prompt").get<Prompt>();
  r.train_accuracy = opt_get<double>(j, "train_accuracy");
  r.test_accuracy = opt_get<double>(j, "test_accuracy");
  r.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
  r.score_accuracy.clear();
  for (const auto& p : j.at("score_accuracy"))
    r.score_accuracy.emplace_back(p.at("reviewer_score").get<double>(),
                                  p.at("task_accuracy").get<double>());
  r.state = j.at("state").get<RunState>();
  r.prompts = j.at("prompts").get<std::vector<Prompt>>();
  r.flags = j.at("flags").get<std::vector<Flag>>();
  r.stats = j.at("stats").get<RunStats>();
}

inline bool operator==(const RunReport& a, const RunReport& b) {
  return Json(a).dump() == Json(b).dump();
}

inline void to_json(Json& j, const Checkpoint& c) {
  j = Json{{"version", Checkpoint::kVersion},
           {"status", c.status},
           {"config", c.config},
           {"task", c.task},
           {"initial", c.initial},
           {"prompts", c.prompts},
           {"state", c.state},
           {"iterations", c.iterations},
           {"flags", c.flags},
           {"log", c.log},
           {"stats", c.stats},
           {"test_accuracy", opt_json(c.test_accuracy)}};
}
inline void from_json(const Json& j, Checkpoint& c) {
  if (j.at("version").get<int>() != Checkpoint::kVersion)
    throw StateCorrupt("unsupported checkpoint version");
  c.status = j.at("status").get<std::string>();
  c.config = j.at("config").get<RunConfig>();
  c.task = j.at("task").get<TaskSpec>();
  c.initial = j.at("initial").get<Prompt>();
  c.prompts = j.at("prompts").get<std::vector<Prompt>>();
  c.state = j.at("state").get<RunState>();
  c.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
  c.flags = j.at("flags").get<std::vector<Flag>>();
  c.log = j.at("log").get<std::vector<std::string>>();
  c.stats = j.at("stats").get<RunStats>();
  c.test_accuracy = opt_get<double>(j, "test_accuracy");
}

// ---- files -----------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes via a temporary sibling and rename so readers never see a torn file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  write_file_atomic(path, dump_canonical(Json(c)));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw StateCorrupt(e.what());
  }
  try {
    Checkpoint c = Json::parse(text).get<Checkpoint>();
    validate(c.config);
    validate(c.task);
    if (c.state.t < 0 || c.state.t > c.config.iterations)
      throw StateCorrupt("iteration counter out of range");
    if (c.iterations.size() != static_cast<std::size_t>(c.state.t))
      throw StateCorrupt("iteration records do not match the counter");
    return c;
  } catch (const StateCorrupt&) {
    throw;
  } catch (const std::exception& e) {
    throw StateCorrupt(std::string("invalid state file ") + path.string() + ": " + e.what());
  }
}

inline RunReport load_report(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path)).get<RunReport>();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw StateCorrupt(std::string("invalid report ") + path.string() + ": " + e.what());
  }
}

// Report JSON with timing fields removed, for determinism comparisons.
inline std::string report_json_without_timing(const RunReport& r) {
  Json j = r;
  j["stats"].erase("wall_clock_ms");
  j["stats"].erase("started_at");
  return dump_canonical(j);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// iteration,candidate,reviewer_score,subset_accuracy,best_so_far with one
// row per surviving candidate, in top-n order.
inline std::string iterations_csv(const RunReport& r) {
  std::string out = "iteration,candidate,reviewer_score,subset_accuracy,best_so_far\n";
  for (const auto& it : r.iterations) {
    for (const auto& id : it.survivors) {
      for (const auto& row : it.candidates) {
        if (row.prompt != id || !row.survived) continue;
        out += std::to_string(it.iteration) + "," + csv_field(row.prompt) + "," +
               format_number(row.reviewer_score) + "," +
               format_number(row.subset_accuracy.value_or(0.0)) + "," +
               format_number(row.best_so_far.value_or(0.0)) + "\n";
        break;
      }
    }
  }
  return out;
}

inline std::string score_accuracy_csv(const RunReport& r) {
  std::string out = "reviewer_score,task_accuracy\n";
  for (const auto& [score, acc] : r.score_accuracy)
    out += format_number(score) + "," + format_number(acc) + "\n";
  return out;
}

struct EmittedFiles {
  std::filesystem::path report_json;
  std::filesystem::path iterations_csv;
  std::filesystem::path score_accuracy_csv;
  std::filesystem::path best_prompt_txt;
};

inline EmittedFiles emit_report(const RunReport& report, const std::filesystem::path& out_dir) {
  EmittedFiles files{out_dir / "report.json", out_dir / "iterations.csv",
                     out_dir / "score_accuracy.csv", out_dir / "best_prompt.txt"};
  write_file_atomic(files.report_json, dump_canonical(Json(report)));
  write_file_atomic(files.iterations_csv, iterations_csv(report));
  write_file_atomic(files.score_accuracy_csv, score_accuracy_csv(report));
  write_file_atomic(files.best_prompt_txt, report.best_prompt.text);
  return files;
}

}  // namespace evoke
