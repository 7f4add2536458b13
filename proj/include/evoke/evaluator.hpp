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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoke/backend.hpp"
#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/templates.hpp"
#include "evoke/util.hpp"

namespace evoke {

namespace detail {

inline bool is_quote(char c) { return c == '"' || c == '\'' || c == '`'; }

inline bool is_terminal_punct(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace detail

// Lowercase, trim, collapse whitespace, strip surrounding quotes and
// terminal punctuation.
inline std::string normalize(std::string_view text) {
  std::string s = collapse_whitespace(lowercase(text));
  for (bool changed = true; changed && !s.empty();) {
    changed = false;
    if (s.size() >= 2 && detail::is_quote(s.front()) && s.back() == s.front()) {
      s = s.substr(1, s.size() - 2);
      changed = true;
    } else if (detail::is_terminal_punct(s.back())) {
      s.pop_back();
      changed = true;
    } else if (detail::is_quote(s.front()) || detail::is_quote(s.back())) {
      // unbalanced quote left over after dropping punctuation: "arrival".
      if (detail::is_quote(s.front())) s.erase(s.begin());
      if (!s.empty() && detail::is_quote(s.back())) s.pop_back();
      changed = true;
    }
    if (changed) s = trim(s);
  }
  return s;
}

// First standalone option letter A-D in `text`, if any.
inline std::optional<char> first_option_letter(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c < 'A' || c > 'D') continue;
    const bool left_ok = i == 0 || !is_alnum(text[i - 1]);
    const bool right_ok = i + 1 == text.size() || !is_alnum(text[i + 1]);
    // "A's" and "A-list" are words, not options.
    const bool apostrophe = i + 1 < text.size() && (text[i + 1] == '\'' || text[i + 1] == '-');
    if (left_ok && right_ok && !apostrophe) return c;
  }
  return std::nullopt;
}

// Canonical label of the earliest alias occurring at word boundaries in the
// normalized `text`; at equal positions the longest alias wins.
inline std::optional<std::string> first_label(std::string_view text,
                                              const LabelAliases& aliases) {
  const std::string norm = normalize(text);
  std::optional<std::string> best;
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  for (const auto& [surface, label] : aliases) {
    const std::string key = normalize(surface);
    if (key.empty()) continue;
    for (std::size_t pos = norm.find(key); pos != std::string::npos;
         pos = norm.find(key, pos + 1)) {
      const bool left_ok = pos == 0 || (!is_alnum(norm[pos - 1]) && norm[pos - 1] != '-');
      const std::size_t end = pos + key.size();
      const bool right_ok = end == norm.size() || (!is_alnum(norm[end]) && norm[end] != '-');
      if (!left_ok || !right_ok) continue;
      if (pos < best_pos || (pos == best_pos && key.size() > best_len)) {
        best = label;
        best_pos = pos;
        best_len = key.size();
      }
      break;
    }
  }
  return best;
}

struct GradeResult {
  bool correct = false;
  bool ungradeable = false;  // no option letter / label token in the prediction
};

inline GradeResult grade(MetricKind metric, std::string_view prediction,
                         std::string_view gold,
                         const LabelAliases& aliases = default_label_aliases()) {
  switch (metric) {
    case MetricKind::exact_match:
      return {normalize(prediction) == normalize(gold), false};
    case MetricKind::contains_gold: {
      const std::string g = normalize(gold);
      return {!g.empty() && normalize(prediction).find(g) != std::string::npos, false};
    }
    case MetricKind::multiple_choice: {
      const auto p = first_option_letter(prediction);
      if (!p) return {false, true};
      std::string upper(trim_view(gold));
      for (char& c : upper)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      const auto g = first_option_letter(upper);
      return {g && *g == *p, false};
    }
    case MetricKind::binary_label: {
      const auto p = first_label(prediction, aliases);
      if (!p) return {false, true};
      const auto g = first_label(gold, aliases);
      return {g ? *g == *p : normalize(gold) == normalize(*p), false};
    }
  }
  return {};
}

struct PredictionRecord {
  std::string example;
  std::string prediction;
  bool graded = false;
  std::string normalized_prediction;
  bool ungradeable = false;
  bool backend_failed = false;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct AccuracyResult {
  double accuracy = 0.0;
  std::vector<PredictionRecord> records;
};

inline ChatRequest render_task_prompt(const std::string& instruction, const Example& ex,
                                      const Sampling& sampling = {}) {
  ChatRequest r;
  r.user = fill_template(templates::kTaskEval,
                         {{"instruction", instruction}, {"input", ex.input}});
  r.tag = RoleTag::task_eval;
  r.temperature = sampling.task_eval_temperature;
  r.max_tokens = sampling.task_max_tokens;
  return r;
}

// Runs `instruction` over `dataset` and grades every prediction. Calls that
// still fail after retries grade as incorrect and are marked; if all of them
// fail the backend is considered down.
inline AccuracyResult task_accuracy(const std::string& instruction,
                                    const std::vector<Example>& dataset, MetricKind metric,
                                    ChatBackend& backend,
                                    const LabelAliases& aliases = default_label_aliases(),
                                    const Sampling& sampling = {},
                                    std::size_t parallelism = 1) {
  if (dataset.empty()) throw PreconditionError("task_accuracy needs a non-empty dataset");
  auto records = parallel_map(dataset.size(), parallelism, [&](std::size_t i) {
    const Example& ex = dataset[i];
    PredictionRecord rec;
    rec.example = ex.id;
    try {
      rec.prediction = backend.complete(render_task_prompt(instruction, ex, sampling)).text;
    } catch (const RetriesExhausted&) {
      rec.backend_failed = true;
    } catch (const MalformedResponse&) {
      rec.backend_failed = true;
    }
    rec.normalized_prediction = normalize(rec.prediction);
    if (!rec.backend_failed) {
      const GradeResult g = grade(metric, rec.prediction, ex.gold_output, aliases);
      rec.graded = g.correct;
      rec.ungradeable = g.ungradeable;
    }
    return rec;
  });
  std::size_t correct = 0;
  std::size_t failed = 0;
  for (const auto& r : records) {
    correct += r.graded ? 1 : 0;
    failed += r.backend_failed ? 1 : 0;
  }
  if (failed == records.size())
    throw BackendDown("every task evaluation call failed (" + std::to_string(failed) + ")");
  return {static_cast<double>(correct) / static_cast<double>(records.size()),
          std::move(records)};
}

inline AccuracyResult task_accuracy(const Prompt& prompt, const std::vector<Example>& dataset,
                                    MetricKind metric, ChatBackend& backend,
                                    const LabelAliases& aliases = default_label_aliases(),
                                    const Sampling& sampling = {},
                                    std::size_t parallelism = 1) {
  return task_accuracy(prompt.text, dataset, metric, backend, aliases, sampling, parallelism);
}

}  // namespace evoke
