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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "evoke/author.hpp"
#include "evoke/backend.hpp"
#include "evoke/core.hpp"
#include "evoke/selector.hpp"
#include "evoke/templates.hpp"
#include "evoke/util.hpp"

namespace evoke {

inline constexpr std::size_t kDigestChars = 120;

// First 120 characters plus a content hash.
inline std::string prompt_digest(std::string_view text) {
  const std::string flat = collapse_whitespace(text);
  std::string out = flat.substr(0, kDigestChars);
  if (flat.size() > kDigestChars) out += "...";
  return out + " #" + text_hash(text).substr(0, 8);
}

inline std::string reviewer_memory_line(const ReviewerMemoryEntry& e) {
  return "[" + collapse_whitespace(e.edit.summary) + "] | " + prompt_digest(e.prompt_text) +
         " | accuracy " + format_percent(e.task_accuracy) + "%";
}

inline ChatRequest render_reviewer_prompt(const std::string& description,
                                          const Prompt& candidate,
                                          const std::vector<ReviewerMemoryEntry>& memory,
                                          std::optional<std::size_t> memory_cap = std::nullopt,
                                          const Sampling& sampling = {}) {
  ChatRequest r;
  r.user = fill_template(
      templates::kReviewer,
      {{"description", description},
       {"memory", render_memory_block(memory, memory_cap, reviewer_memory_line)},
       {"instruction", candidate.text}});
  r.tag = RoleTag::reviewer;
  r.temperature = sampling.reviewer_temperature;
  r.max_tokens = sampling.judge_max_tokens;
  return r;
}

struct ReviewedCandidate {
  CandidateEvaluation eval;
  std::string raw_response;
  bool unratable = false;  // parse failed twice; scored at the floor
};

// Scores each candidate; an unratable candidate gets the minimum score.
inline std::vector<ReviewedCandidate> score_candidates(
    const std::vector<Prompt>& candidates, const std::string& description,
    const std::vector<ReviewerMemoryEntry>& memory, ChatBackend& backend,
    int iteration, std::optional<std::size_t> memory_cap = std::nullopt,
    const Sampling& sampling = {}, std::size_t parallelism = 1) {
  if (candidates.empty()) throw PreconditionError("no candidates to score");
  return parallel_map(candidates.size(), parallelism, [&](std::size_t i) {
    const ChatRequest req =
        render_reviewer_prompt(description, candidates[i], memory, memory_cap, sampling);
    ReviewedCandidate out;
    std::optional<Score> score;
    for (int tries = 0; tries < 2 && !score; ++tries) {
      out.raw_response = backend.complete(req).text;
      score = try_parse_score(out.raw_response);
    }
    out.unratable = !score;
    out.eval = {candidates[i].id, score.value_or(Score(Score::kMin)), std::nullopt, iteration};
    return out;
  });
}

// Indices of the min(n, |evals|) best-scored evaluations, highest first,
// earlier index first on ties.
inline std::vector<std::size_t> top_n_indices(const std::vector<CandidateEvaluation>& evals,
                                              int n) {
  if (n < 1) throw PreconditionError("top-n needs n >= 1");
  std::vector<std::size_t> idx(evals.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return evals[a].reviewer_score > evals[b].reviewer_score;
  });
  idx.resize(std::min(idx.size(), static_cast<std::size_t>(n)));
  return idx;
}

inline std::vector<CandidateEvaluation> select_top_n(const std::vector<CandidateEvaluation>& evals,
                                                     int n) {
  std::vector<CandidateEvaluation> out;
  for (std::size_t i : top_n_indices(evals, n)) out.push_back(evals[i]);
  return out;
}

}  // namespace evoke
