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

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evoke/author.hpp"
#include "evoke/backend.hpp"
#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/evaluator.hpp"
#include "evoke/http_backend.hpp"
#include "evoke/report.hpp"
#include "evoke/reviewer.hpp"
#include "evoke/selector.hpp"

namespace evoke {

inline constexpr std::string_view kInitialEdit = "(initial prompt)";
inline constexpr const char* kStateFile = "state.json";
inline constexpr const char* kLogFile = "run.log";

struct RunOptions {
  // Where state.json, run.log and the report files are written.
  std::optional<std::filesystem::path> out_dir;
  // Persist and return once this iteration is complete.
  std::optional<int> stop_after;
  std::function<void(const std::string&)> log_sink;
};

// Thrown when a run stops on a backend failure; the partial report has
// already been persisted when out_dir is set.
class RunAborted : public Error {
 public:
  RunAborted(const std::string& what, RunReport report)
      : Error(what), report_(std::move(report)) {}
  const RunReport& report() const { return report_; }

 private:
  RunReport report_;
};

inline Checkpoint start_checkpoint(TaskSpec task, Prompt initial, RunConfig config) {
  validate(config);
  validate(task);
  validate(initial);
  if (initial.iteration != 0) throw PreconditionError("initial prompt must have iteration 0");
  Checkpoint cp;
  cp.config = std::move(config);
  cp.task = std::move(task);
  cp.initial = initial;
  cp.prompts.push_back(initial);
  cp.state.pool.push_back(std::move(initial));
  return cp;
}

inline const Prompt& find_prompt(const std::vector<Prompt>& prompts, const std::string& id) {
  for (const auto& p : prompts)
    if (p.id == id) return p;
  throw StateCorrupt("unknown prompt id " + id);
}

inline RunReport make_report(const Checkpoint& cp) {
  RunReport r;
  r.config = cp.config;
  r.task_name = cp.task.name;
  r.status = cp.status;
  r.iterations = cp.iterations;
  for (const auto& e : cp.state.history)
    if (e.task_accuracy) r.score_accuracy.emplace_back(e.reviewer_score.value(), *e.task_accuracy);
  if (cp.state.best) {
    r.best_prompt = find_prompt(cp.prompts, cp.state.best->prompt);
    r.train_accuracy = cp.state.best->accuracy;
  } else {
    r.best_prompt = cp.initial;
  }
  r.test_accuracy = cp.test_accuracy;
  r.state = cp.state;
  r.prompts = cp.prompts;
  r.flags = cp.flags;
  r.stats = cp.stats;
  return r;
}

// Error triples for the author: the incumbent's mistakes on the subset,
// hardest first. With no mistakes the hardest pairs are shown instead.
inline std::vector<ErrorTriple> build_error_triples(const std::vector<Example>& subset,
                                                    const std::vector<PredictionRecord>& records,
                                                    const std::vector<DifficultyRating>& ratings,
                                                    std::size_t cap) {
  std::map<std::string, double> difficulty;
  for (const auto& r : ratings) difficulty[r.example] = r.score.value();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!records[i].graded) order.push_back(i);
  if (order.empty())
    for (std::size_t i = 0; i < records.size(); ++i) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return difficulty[subset[a].id] > difficulty[subset[b].id];
  });
  if (order.size() > cap) order.resize(cap);
  std::vector<ErrorTriple> out;
  for (std::size_t i : order)
    out.push_back({subset[i].input, subset[i].gold_output,
                   records[i].backend_failed ? "(no response)" : records[i].prediction});
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs the author / reviewer / selector refinement loop over a checkpoint.
class Orchestrator {
 public:
  Orchestrator(Checkpoint cp, std::shared_ptr<ChatBackend> backend, RunOptions options = {})
      : cp_(std::move(cp)), options_(std::move(options)) {
    validate(cp_.config);
    counting_ = std::make_shared<CountingBackend>(std::move(backend), cp_.config.max_total_calls,
                                                  cp_.stats.calls);
    counting_->add_tokens(cp_.stats.prompt_tokens, cp_.stats.completion_tokens);
  }

  RunReport run() {
    if (cp_.status == "completed") return make_report(cp_);
    const auto started = std::chrono::steady_clock::now();
    if (cp_.stats.started_at.empty()) cp_.stats.started_at = utc_timestamp();
    cp_.status = "running";
    try {
      while (cp_.state.t < cp_.config.iterations) {
        run_iteration();
        if (options_.stop_after && cp_.state.t >= *options_.stop_after &&
            cp_.state.t < cp_.config.iterations) {
          cp_.status = "paused";
          add_wall_clock(started);
          return persist();
        }
      }
      finish();
    } catch (const BackendError& e) {
      cp_.status = std::string("aborted: ") + e.what();
      const Flag f{"aborted", cp_.state.t + 1, e.what()};
      cp_.flags.push_back(f);
      log(flag_log_line(f));
      add_wall_clock(started);
      RunReport partial = persist();
      throw RunAborted(cp_.status, std::move(partial));
    }
    add_wall_clock(started);
    return persist();
  }

  const Checkpoint& checkpoint() const { return cp_; }
  const CountingBackend& counter() const { return *counting_; }

 private:
  struct Pending {
    std::vector<Flag> flags;
    std::vector<std::string> log;
    int iteration = 0;

    void flag(std::string kind, std::string detail) {
      Flag f{std::move(kind), iteration, std::move(detail)};
      log.push_back(flag_log_line(f));
      flags.push_back(std::move(f));
    }
  };

  void log(const std::string& line) {
    cp_.log.push_back(line);
    if (options_.log_sink) options_.log_sink(line);
  }

  void commit(Pending& p) {
    for (auto& line : p.log) log(line);
    for (auto& f : p.flags) cp_.flags.push_back(std::move(f));
    cp_.stats.calls = counting_->calls();
    cp_.stats.prompt_tokens = counting_->prompt_tokens();
    cp_.stats.completion_tokens = counting_->completion_tokens();
  }

  void add_wall_clock(std::chrono::steady_clock::time_point started) {
    cp_.stats.wall_clock_ms += std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - started)
                                   .count();
  }

  RunReport persist() {
    RunReport report = make_report(cp_);
    if (options_.out_dir) {
      save_checkpoint(cp_, *options_.out_dir / kStateFile);
      write_file_atomic(*options_.out_dir / kLogFile, join(cp_.log, "\n") + "\n");
      emit_report(report, *options_.out_dir);
    }
    return report;
  }

  // Pool member with the best subset accuracy in the last iteration
  // (earliest in top-n order on ties); the initial prompt before that.
  Prompt incumbent() const {
    if (cp_.state.t == 0) return cp_.initial;
    const CandidateEvaluation* best = nullptr;
    for (const auto& e : cp_.state.history)
      if (e.iteration == cp_.state.t && e.task_accuracy &&
          (!best || *e.task_accuracy > *best->task_accuracy))
        best = &e;
    if (!best) throw StateCorrupt("no evaluated pool member in iteration " +
                                  std::to_string(cp_.state.t));
    return find_prompt(cp_.state.pool, best->prompt);
  }

  void note_evaluation(Pending& p, const std::string& prompt_id, const AccuracyResult& res) {
    for (const auto& rec : res.records) {
      if (rec.backend_failed)
        p.flag("task_eval_failure", "prompt=" + prompt_id + " example=" + rec.example);
      else if (rec.ungradeable)
        p.flag("ungradeable_output", "prompt=" + prompt_id + " example=" + rec.example);
    }
  }

  AccuracyResult evaluate(const std::string& text, const std::vector<Example>& data) {
    return task_accuracy(text, data, cp_.task.metric, *counting_, cp_.task.aliases,
                         cp_.config.sampling, cp_.config.parallelism);
  }

  void run_iteration() {
    const RunConfig& cfg = cp_.config;
    const int t = cp_.state.t + 1;
    Pending p;
    p.iteration = t;
    const Prompt current = incumbent();
    p.log.push_back("iteration " + std::to_string(t) + ": incumbent " + current.id);

    IterationRecord rec;
    rec.iteration = t;
    rec.incumbent = current.id;

    // Selector: difficulty against the current instruction, then the subset.
    rec.ratings = rate_all(current.text, cp_.task.train, *counting_, cfg.sampling, cfg.parallelism);
    for (const auto& r : rec.ratings)
      if (r.fallback)
        p.flag("selector_fallback", "example=" + r.example + " imputed=" + r.score.str());
    rec.subset = select_subset(rec.ratings, cfg.strategy, cfg.hard_fraction,
                               derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    std::vector<Example> subset;
    for (const auto& id : rec.subset)
      for (const auto& ex : cp_.task.train)
        if (ex.id == id) subset.push_back(ex);
    p.log.push_back("iteration " + std::to_string(t) + ": subset " + join(rec.subset, ","));

    // Author (or paraphraser).
    std::vector<Candidate> generated;
    if (cfg.mode == RunMode::evoke) {
      const AccuracyResult inc = evaluate(current.text, subset);
      note_evaluation(p, current.id, inc);
      rec.incumbent_accuracy = inc.accuracy;
      const auto errors = build_error_triples(subset, inc.records, rec.ratings, cfg.error_pair_cap);
      rec.error_pairs = errors.size();
      generated = generate_candidates(current, errors, cp_.state.author_memory, cfg.candidates,
                                      *counting_, cfg.memory_cap, cfg.sampling, cfg.parallelism);
    } else {
      generated = paraphrase_candidates(current, cfg.candidates, *counting_, cfg.sampling,
                                        cfg.parallelism);
    }
    for (const auto& c : generated)
      if (c.edit.summary == kNoOpEdit) p.flag("author_noop", "candidate=" + c.prompt.id);

    struct Entry {
      Prompt prompt;
      EditRecord edit;
      bool generated;
    };
    std::vector<Entry> review;
    if (t == 1)
      review.push_back({cp_.initial, make_edit(std::string(kInitialEdit), cp_.initial.id, t), false});
    for (const auto& c : generated) review.push_back({c.prompt, c.edit, true});

    // Reviewer.
    std::vector<Prompt> prompts;
    for (const auto& e : review) prompts.push_back(e.prompt);
    const auto reviewed = score_candidates(prompts, cp_.task.description,
                                           cp_.state.reviewer_memory, *counting_, t,
                                           cfg.memory_cap, cfg.sampling, cfg.parallelism);
    std::vector<CandidateEvaluation> evals;
    for (const auto& r : reviewed) {
      if (r.unratable) p.flag("reviewer_unratable", "candidate=" + r.eval.prompt);
      evals.push_back(r.eval);
    }
    const auto top = top_n_indices(evals, cfg.top_n);

    // Task accuracy for the survivors, one prompt at a time.
    std::vector<std::optional<double>> accuracy(review.size());
    for (std::size_t i : top) {
      const AccuracyResult res = evaluate(review[i].prompt.text, subset);
      note_evaluation(p, review[i].prompt.id, res);
      accuracy[i] = res.accuracy;
    }

    std::vector<CandidateOutcome> outcomes;
    for (std::size_t i = 0; i < review.size(); ++i) {
      outcomes.push_back({review[i].edit, review[i].prompt.text, evals[i].reviewer_score,
                          accuracy[i], review[i].generated});
      rec.candidates.push_back({review[i].prompt.id, review[i].edit.summary,
                                evals[i].reviewer_score.value(), reviewed[i].unratable,
                                accuracy[i].has_value(), accuracy[i], std::nullopt});
    }
    RunState next = append_memories(cp_.state, outcomes, cfg.memory_cap, cfg.mode == RunMode::evoke);
    next.pool.clear();
    for (std::size_t i : top) {
      CandidateEvaluation e = evals[i];
      e.task_accuracy = accuracy[i];
      next.history.push_back(e);
      next = update_best(std::move(next), e);
      rec.candidates[i].best_so_far = next.best->accuracy;
      next.pool.push_back(review[i].prompt);
      rec.survivors.push_back(review[i].prompt.id);
    }
    next.t = t;
    rec.best_after = next.best;
    p.log.push_back("iteration " + std::to_string(t) + ": survivors " + join(rec.survivors, ",") +
                    " best " + next.best->prompt + " (" + format_number(next.best->accuracy) + ")");

    cp_.state = std::move(next);
    for (const auto& c : generated) cp_.prompts.push_back(c.prompt);
    cp_.iterations.push_back(std::move(rec));
    commit(p);
    if (options_.out_dir) save_checkpoint(cp_, *options_.out_dir / kStateFile);
  }

  void finish() {
    Pending p;
    p.iteration = cp_.config.iterations + 1;
    const Prompt best = cp_.state.best ? find_prompt(cp_.prompts, cp_.state.best->prompt)
                                       : cp_.initial;
    const AccuracyResult res = evaluate(best.text, cp_.task.test);
    note_evaluation(p, best.id, res);
    cp_.test_accuracy = res.accuracy;
    p.log.push_back("final: best " + best.id + " test accuracy " + format_number(res.accuracy));
    cp_.status = "completed";
    commit(p);
  }

  Checkpoint cp_;
  RunOptions options_;
  std::shared_ptr<CountingBackend> counting_;
};

inline RunReport run(TaskSpec task, Prompt initial, RunConfig config,
                     std::shared_ptr<ChatBackend> backend, RunOptions options = {}) {
  if (!backend) backend = make_backend(config.backend);
  Orchestrator orch(start_checkpoint(std::move(task), std::move(initial), std::move(config)),
                    std::move(backend), std::move(options));
  return orch.run();
}

// Continues a persisted run from its last completed iteration. A completed
// run returns its report without issuing calls.
inline RunReport resume(const std::filesystem::path& state_path,
                        std::shared_ptr<ChatBackend> backend = nullptr, RunOptions options = {}) {
  Checkpoint cp = load_checkpoint(state_path);
  if (!options.out_dir) options.out_dir = state_path.has_parent_path()
                                              ? state_path.parent_path()
                                              : std::filesystem::path(".");
  if (cp.status == "completed") return make_report(cp);
  if (!backend) backend = make_backend(cp.config.backend);
  Orchestrator orch(std::move(cp), std::move(backend), std::move(options));
  return orch.run();
}

}  // namespace evoke
