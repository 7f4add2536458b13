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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/report.hpp"
#include "evoke/util.hpp"

// Dataset ingestion and configuration files.
namespace evoke {

// Parses JSON lines of {"input", "output", optional "id"}. Without an id a
// record is named by its 1-based line number.
inline std::vector<Example> parse_dataset(std::string_view text) {
  std::vector<Example> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim_view(raw);
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ParseError("record must be a JSON object", line_no);
    for (const char* key : {"input", "output"})
      if (!j.contains(key) || !j[key].is_string())
        throw ParseError(std::string("missing string field '") + key + "'", line_no);
    Example ex;
    if (j.contains("id")) {
      if (j["id"].is_string())
        ex.id = j["id"].get<std::string>();
      else if (j["id"].is_number_integer())
        ex.id = std::to_string(j["id"].get<std::int64_t>());
      else
        throw ParseError("id must be a string or integer", line_no);
    } else {
      ex.id = std::to_string(line_no);
    }
    ex.input = j["input"].get<std::string>();
    ex.gold_output = j["output"].get<std::string>();
    if (trim_view(ex.input).empty() || trim_view(ex.gold_output).empty())
      throw ParseError("input and output must be non-empty", line_no);
    if (!ids.insert(ex.id).second)
      throw DuplicateId("duplicate id '" + ex.id + "' at line " + std::to_string(line_no));
    out.push_back(std::move(ex));
  }
  if (out.empty()) throw EmptyDataset("dataset has no records");
  return out;
}

inline std::vector<Example> load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path));
}

inline std::string dataset_to_jsonl(const std::vector<Example>& examples) {
  std::string out;
  for (const auto& ex : examples) out += Json(ex).dump() + "\n";
  return out;
}

inline void save_dataset(const std::vector<Example>& examples,
                         const std::filesystem::path& path) {
  write_file_atomic(path, dataset_to_jsonl(examples));
}

struct Split {
  std::vector<Example> train;
  std::vector<Example> test;
};

// Seeded uniform shuffle; the first ceil(ratio * n) examples train.
inline Split split_dataset(std::vector<Example> examples, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("split ratio must be in (0,1)");
  if (examples.size() < 2) throw TooFewExamples("need at least 2 examples to split");
  Rng rng(seed);
  rng.shuffle(examples);
  const std::size_t n_train = ceil_fraction(ratio, examples.size());
  Split s;
  s.train.assign(examples.begin(), examples.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(examples.begin() + static_cast<std::ptrdiff_t>(n_train), examples.end());
  return s;
}

// ---- config files ----------------------------------------------------------

inline std::string resolve_path(const std::filesystem::path& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base_dir / path;
  return path.lexically_normal().string();
}

inline Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

struct TaskConfig {
  TaskSpec task;
  std::optional<std::string> initial_prompt;
  std::optional<int> induce_k;
  std::optional<RunConfig> run;  // optional "run" section
};

// Task file: name, description, metric, optional aliases, and either
// "dataset" (split with split_ratio, default 0.6) or "train" + "test".
// The initial prompt is "initial_prompt" text or {"induce": {"k": K}}.
inline TaskConfig load_task_config(const std::filesystem::path& path,
                                   std::optional<std::uint64_t> seed_override = std::nullopt) {
  const Json j = read_json_file(path);
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  TaskConfig cfg;
  try {
    cfg.task.name = j.at("name").get<std::string>();
    cfg.task.description = j.value("description", cfg.task.name);
    cfg.task.metric = parse_metric(j.value("metric", std::string("exact_match")));
    if (j.contains("aliases")) cfg.task.aliases = j.at("aliases").get<LabelAliases>();
    if (j.contains("run")) cfg.run = j.at("run").get<RunConfig>();
    const std::uint64_t split_seed =
        j.contains("split_seed") ? j.at("split_seed").get<std::uint64_t>()
                                 : seed_override.value_or(cfg.run ? cfg.run->seed : 0);
    if (j.contains("dataset")) {
      auto all = load_dataset(resolve_path(dir, j.at("dataset").get<std::string>()));
      auto s = split_dataset(std::move(all), j.value("split_ratio", 0.6), split_seed);
      cfg.task.train = std::move(s.train);
      cfg.task.test = std::move(s.test);
    } else {
      cfg.task.train = load_dataset(resolve_path(dir, j.at("train").get<std::string>()));
      cfg.task.test = load_dataset(resolve_path(dir, j.at("test").get<std::string>()));
    }
    if (j.contains("initial_prompt")) cfg.initial_prompt = j.at("initial_prompt").get<std::string>();
    if (j.contains("induce")) cfg.induce_k = j.at("induce").value("k", 5);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad task config " + path.string() + ": " + e.what());
  }
  if (!cfg.initial_prompt && !cfg.induce_k)
    throw ConfigError("task config needs initial_prompt or induce");
  validate(cfg.task);
  return cfg;
}

struct BackendFile {
  BackendConfig backend;
  std::optional<std::uint64_t> max_total_calls;
  std::optional<std::size_t> parallelism;
  std::optional<Sampling> sampling;
};

inline BackendFile load_backend_config(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  BackendFile f;
  try {
    const Json& oj = j;
    f.backend = oj.get<BackendConfig>();
    if (f.backend.script_path) f.backend.script_path = resolve_path(dir, *f.backend.script_path);
    f.max_total_calls = opt_get<std::uint64_t>(oj, "max_total_calls");
    f.parallelism = opt_get<std::size_t>(oj, "parallelism");
    if (oj.contains("sampling")) f.sampling = oj.at("sampling").get<Sampling>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad backend config " + path.string() + ": " + e.what());
  }
  return f;
}

// The task's run section with the backend file's settings applied on top.
inline RunConfig merge_run_config(const TaskConfig& task, const BackendFile& backend) {
  RunConfig cfg = task.run.value_or(RunConfig{});
  cfg.backend = backend.backend;
  if (backend.max_total_calls) cfg.max_total_calls = backend.max_total_calls;
  if (backend.parallelism) cfg.parallelism = *backend.parallelism;
  if (backend.sampling) cfg.sampling = *backend.sampling;
  return cfg;
}

}  // namespace evoke
