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

// Command-line front end: run, resume, report, attack, induce, eval.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evoke/evoke.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct RunFlags {
  std::string task;
  std::string backend;
  std::string out;
  std::optional<std::string> mode;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<int> candidates;
  std::optional<int> top_n;
  std::optional<double> hard_fraction;
  std::optional<std::uint64_t> max_calls;
  std::optional<int> stop_after;
  bool quiet = false;
};

void stderr_log(const std::string& line) { std::cerr << line << "\n"; }

int do_run(const RunFlags& f) {
  const evoke::BackendFile bf = evoke::load_backend_config(f.backend);
  evoke::TaskConfig tc = evoke::load_task_config(f.task, f.seed);
  evoke::RunConfig cfg = evoke::merge_run_config(tc, bf);
  if (f.mode) cfg.mode = evoke::parse_mode(*f.mode);
  if (f.strategy) cfg.strategy = evoke::parse_strategy(*f.strategy);
  if (f.seed) cfg.seed = *f.seed;
  if (f.iterations) cfg.iterations = *f.iterations;
  if (f.candidates) cfg.candidates = *f.candidates;
  if (f.top_n) cfg.top_n = *f.top_n;
  if (f.hard_fraction) cfg.hard_fraction = *f.hard_fraction;
  if (f.max_calls) cfg.max_total_calls = *f.max_calls;
  evoke::validate(cfg);

  auto backend = evoke::make_backend(cfg.backend);
  evoke::Prompt initial;
  if (tc.initial_prompt) {
    initial = evoke::make_root_prompt("p0", *tc.initial_prompt);
  } else {
    initial = evoke::induce_initial_prompt(tc.task.train, *tc.induce_k, *backend, cfg.sampling);
  }

  evoke::RunOptions opts;
  opts.out_dir = fs::path(f.out);
  opts.stop_after = f.stop_after;
  if (!f.quiet) opts.log_sink = stderr_log;
  const evoke::RunReport report =
      evoke::run(std::move(tc.task), std::move(initial), std::move(cfg), backend, opts);
  std::cout << "status: " << report.status << "\n"
            << "best prompt: " << report.best_prompt.id << "\n";
  if (report.train_accuracy)
    std::cout << "train-subset accuracy: " << evoke::format_number(*report.train_accuracy) << "\n";
  if (report.test_accuracy)
    std::cout << "test accuracy: " << evoke::format_number(*report.test_accuracy) << "\n";
  return kExitOk;
}

int do_resume(const std::string& state, bool quiet) {
  evoke::RunOptions opts;
  if (!quiet) opts.log_sink = stderr_log;
  const evoke::RunReport report = evoke::resume(state, nullptr, opts);
  std::cout << "status: " << report.status << "\n";
  if (report.test_accuracy)
    std::cout << "test accuracy: " << evoke::format_number(*report.test_accuracy) << "\n";
  return kExitOk;
}

int do_report(const std::string& state, const std::string& out) {
  const evoke::Checkpoint cp = evoke::load_checkpoint(state);
  const auto files = evoke::emit_report(evoke::make_report(cp), out);
  std::cout << files.report_json.string() << "\n";
  return kExitOk;
}

int do_attack(const std::string& in, const std::string& out, std::uint64_t seed,
              const std::vector<std::string>& fields) {
  const auto data = evoke::load_dataset(in);
  const auto attacked = evoke::attack_dataset(data, seed, fields);
  for (const auto& id : attacked.unperturbed)
    std::cerr << "FLAG unperturbed example=" << id << " (nothing to attack)\n";
  evoke::save_dataset(attacked.examples, out);
  std::cout << attacked.examples.size() << " examples written, "
            << attacked.unperturbed.size() << " unperturbed\n";
  return kExitOk;
}

int do_induce(const std::string& in, int k, const std::string& backend_path) {
  const auto data = evoke::load_dataset(in);
  const evoke::BackendFile bf = evoke::load_backend_config(backend_path);
  auto backend = evoke::make_backend(bf.backend);
  const evoke::Prompt p =
      evoke::induce_initial_prompt(data, k, *backend, bf.sampling.value_or(evoke::Sampling{}));
  std::cout << p.text << "\n";
  return kExitOk;
}

int do_eval(const std::string& prompt_path, const std::string& dataset, const std::string& metric,
            const std::string& backend_path, const std::optional<std::string>& aliases_path) {
  const std::string text = evoke::trim(evoke::read_file(prompt_path));
  const auto data = evoke::load_dataset(dataset);
  const evoke::BackendFile bf = evoke::load_backend_config(backend_path);
  auto backend = evoke::make_backend(bf.backend);
  evoke::LabelAliases aliases = evoke::default_label_aliases();
  if (aliases_path) aliases = evoke::read_json_file(*aliases_path).get<evoke::LabelAliases>();
  const auto res = evoke::task_accuracy(text, data, evoke::parse_metric(metric), *backend, aliases,
                                        bf.sampling.value_or(evoke::Sampling{}),
                                        bf.parallelism.value_or(4));
  std::size_t correct = 0;
  for (const auto& r : res.records) {
    correct += r.graded ? 1 : 0;
    if (r.ungradeable) std::cerr << "FLAG ungradeable_output example=" << r.example << "\n";
    if (r.backend_failed) std::cerr << "FLAG task_eval_failure example=" << r.example << "\n";
  }
  std::cout << "accuracy: " << evoke::format_number(res.accuracy) << " (" << correct << "/"
            << res.records.size() << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evoke: iterative author/reviewer prompt refinement"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Refine a prompt for a task");
  run->add_option("--task", rf.task, "Task config (JSON)")->required();
  run->add_option("--backend", rf.backend, "Backend config (JSON)")->required();
  run->add_option("--out", rf.out, "Output directory")->required();
  run->add_option("--mode", rf.mode, "evoke | paraphrase")
      ->check(CLI::IsMember({"evoke", "paraphrase", "paraphrase_only"}));
  run->add_option("--strategy", rf.strategy, "hard | random | easy | all")
      ->check(CLI::IsMember({"hard", "random", "easy", "all"}));
  run->add_option("--seed", rf.seed, "Seed for every random choice");
  run->add_option("--iterations", rf.iterations, "Refinement iterations (T)");
  run->add_option("--candidates", rf.candidates, "Author candidates per iteration (m)");
  run->add_option("--top-n", rf.top_n, "Survivors per iteration");
  run->add_option("--hard-fraction", rf.hard_fraction, "Fraction of train kept by the selector");
  run->add_option("--max-calls", rf.max_calls, "Abort after this many backend calls");
  run->add_option("--stop-after", rf.stop_after, "Persist and stop after this iteration");
  run->add_flag("--quiet", rf.quiet, "Do not echo the run log");

  std::string state, report_out;
  bool resume_quiet = false;
  auto* resume = app.add_subcommand("resume", "Continue a persisted run");
  resume->add_option("--state", state, "state.json of the run")->required();
  resume->add_flag("--quiet", resume_quiet, "Do not echo the run log");

  auto* report = app.add_subcommand("report", "Re-emit report files from a state file");
  report->add_option("--state", state, "state.json of the run")->required();
  report->add_option("--out", report_out, "Output directory")->required();

  std::string in, out;
  std::uint64_t seed = 0;
  std::vector<std::string> fields{"input"};
  auto* attack = app.add_subcommand("attack", "Add character-level typos to a dataset");
  attack->add_option("--in", in, "Input dataset (JSON lines)")->required();
  attack->add_option("--out", out, "Output dataset")->required();
  attack->add_option("--seed", seed, "Attack seed")->required();
  attack->add_option("--fields", fields, "input, or input.N for tab-separated segment N");

  int k = 5;
  std::string backend_path;
  auto* induce = app.add_subcommand("induce", "Infer an instruction from demonstrations");
  induce->add_option("--in", in, "Dataset (JSON lines)")->required();
  induce->add_option("-k", k, "Number of demonstrations")->required();
  induce->add_option("--backend", backend_path, "Backend config (JSON)")->required();

  std::string prompt_path, dataset, metric;
  std::optional<std::string> aliases_path;
  auto* eval = app.add_subcommand("eval", "Measure a prompt's accuracy on a dataset");
  eval->add_option("--prompt", prompt_path, "File with the instruction text")->required();
  eval->add_option("--dataset", dataset, "Dataset (JSON lines)")->required();
  eval->add_option("--metric", metric, "exact_match | contains_gold | multiple_choice | binary_label")
      ->required()
      ->check(CLI::IsMember({"exact_match", "contains_gold", "multiple_choice", "binary_label"}));
  eval->add_option("--backend", backend_path, "Backend config (JSON)")->required();
  eval->add_option("--aliases", aliases_path, "Label alias table (JSON object)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*run) return do_run(rf);
    if (*resume) return do_resume(state, resume_quiet);
    if (*report) return do_report(state, report_out);
    if (*attack) return do_attack(in, out, seed, fields);
    if (*induce) return do_induce(in, k, backend_path);
    if (*eval) return do_eval(prompt_path, dataset, metric, backend_path, aliases_path);
  } catch (const evoke::RunAborted& e) {
    std::cerr << "run aborted: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
