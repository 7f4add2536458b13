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
#include <cstdint>
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

struct DifficultyRating {
  std::string example;
  Score score{Score::kMin};
  std::string raw_response;
  bool fallback = false;  // score imputed after two failed parses

  friend bool operator==(const DifficultyRating&, const DifficultyRating&) = default;
};

inline ChatRequest render_selector_prompt(const std::string& instruction,
                                          const Example& example,
                                          const Sampling& sampling = {}) {
  ChatRequest r;
  r.user = fill_template(templates::kSelector, {{"instruction", instruction},
                                                {"input", example.input},
                                                {"answer", example.gold_output}});
  r.tag = RoleTag::selector;
  r.temperature = sampling.selector_temperature;
  r.max_tokens = sampling.judge_max_tokens;
  return r;
}

namespace detail {

struct NumberToken {
  double value;
  std::size_t begin;
  std::size_t end;
};

inline std::vector<NumberToken> scan_numbers(std::string_view s) {
  std::vector<NumberToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!(s[i] >= '0' && s[i] <= '9')) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
    if (j + 1 < s.size() && s[j] == '.' && s[j + 1] >= '0' && s[j + 1] <= '9') {
      ++j;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
    }
    const std::string digits(s.substr(i, j - i));
    out.push_back({std::strtod(digits.c_str(), nullptr), i, j});
    i = j;
  }
  return out;
}

inline std::size_t skip_spaces(std::string_view s, std::size_t i) {
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

inline std::size_t skip_spaces_back(std::string_view s, std::size_t i) {
  while (i > 0 && is_space(s[i - 1])) --i;
  return i;
}

// True when the text between two numbers reads as a range: "to", "-", "–".
inline bool is_range_joiner(std::string_view between) {
  const std::string_view t = trim_view(between);
  return t == "-" || t == "\xE2\x80\x93" || t == "to" || t == "TO" || t == "To";
}

}  // namespace detail

// Extracts a 1-10 rating from free-form model output ("7", "7.5", "7/10",
// "Score: 7"). Scale phrases such as "1 to 10" and denominators such as
// "/10" or "out of 10" are not ratings. Values within 0.5 of the scale are
// clamped into it.
inline Score parse_score(std::string_view raw) {
  const auto nums = detail::scan_numbers(raw);
  std::vector<bool> skip(nums.size(), false);
  for (std::size_t k = 0; k < nums.size(); ++k) {
    const auto& n = nums[k];
    if (n.begin > 0) {
      const char prev = raw[n.begin - 1];
      if ((prev >= 'a' && prev <= 'z') || (prev >= 'A' && prev <= 'Z') || prev == '.')
        skip[k] = true;  // part of an identifier or a version string
    }
    const std::size_t before = detail::skip_spaces_back(raw, n.begin);
    if (before > 0 && raw[before - 1] == '/') skip[k] = true;
    if (before >= 6 && iequals_at(raw, before - 6, "out of")) skip[k] = true;
    if (k + 1 < nums.size() && nums[k + 1].value == 10.0 &&
        detail::is_range_joiner(raw.substr(n.end, nums[k + 1].begin - n.end)) &&
        (n.value == 0.0 || n.value == 1.0)) {
      skip[k] = true;
      skip[k + 1] = true;
    }
  }
  bool any = false;
  for (std::size_t k = 0; k < nums.size(); ++k) {
    if (skip[k]) continue;
    any = true;
    const double v = nums[k].value;
    if (v >= 0.5 && v <= 10.5) return Score(std::clamp(v, Score::kMin, Score::kMax));
  }
  throw ScoreParseError(any ? "rating outside the 1-10 scale"
                            : "no rating found in response");
}

inline std::optional<Score> try_parse_score(std::string_view raw) {
  try {
    return parse_score(raw);
  } catch (const ScoreParseError&) {
    return std::nullopt;
  }
}

inline double median(std::vector<double> v) {
  if (v.empty()) return (Score::kMin + Score::kMax) / 2;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// Rates every training example against `instruction`. A response that fails
// to parse is retried once; if it fails again the example receives the
// median of the parsed scores and is marked `fallback`.
inline std::vector<DifficultyRating> rate_all(const std::string& instruction,
                                              const std::vector<Example>& train,
                                              ChatBackend& backend,
                                              const Sampling& sampling = {},
                                              std::size_t parallelism = 1) {
  struct Raw {
    std::optional<Score> score;
    std::string text;
  };
  auto raws = parallel_map(train.size(), parallelism, [&](std::size_t i) {
    const ChatRequest req = render_selector_prompt(instruction, train[i], sampling);
    Raw r;
    for (int tries = 0; tries < 2 && !r.score; ++tries) {
      r.text = backend.complete(req).text;
      r.score = try_parse_score(r.text);
    }
    return r;
  });
  std::vector<double> parsed;
  for (const auto& r : raws)
    if (r.score) parsed.push_back(r.score->value());
  const Score imputed(median(parsed));
  std::vector<DifficultyRating> out;
  out.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const bool fb = !raws[i].score;
    out.push_back({train[i].id, fb ? imputed : *raws[i].score, raws[i].text, fb});
  }
  return out;
}

inline std::size_t subset_size(double fraction, std::size_t n) {
  return std::max<std::size_t>(1, ceil_fraction(fraction, n));
}

// Picks the training subset for one iteration. hard/easy order by score and
// break ties by ascending id; random draws without replacement from `seed`.
inline std::vector<std::string> select_subset(const std::vector<DifficultyRating>& ratings,
                                              SelectionStrategy strategy, double fraction,
                                              std::uint64_t seed) {
  if (ratings.empty()) throw EmptyRatings("cannot select from zero ratings");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw PreconditionError("selection fraction must be in (0,1]");
  std::vector<std::string> out;
  if (strategy == SelectionStrategy::all) {
    for (const auto& r : ratings) out.push_back(r.example);
    return out;
  }
  const std::size_t k = std::min(subset_size(fraction, ratings.size()), ratings.size());
  if (strategy == SelectionStrategy::random) {
    Rng rng(seed);
    for (std::size_t i : rng.sample_indices(ratings.size(), k))
      out.push_back(ratings[i].example);
    return out;
  }
  std::vector<const DifficultyRating*> order;
  for (const auto& r : ratings) order.push_back(&r);
  const bool hard = strategy == SelectionStrategy::hard;
  std::sort(order.begin(), order.end(), [hard](const auto* a, const auto* b) {
    if (a->score != b->score) return hard ? a->score > b->score : a->score < b->score;
    return a->example < b->example;
  });
  for (std::size_t i = 0; i < k; ++i) out.push_back(order[i]->example);
  return out;
}

}  // namespace evoke
