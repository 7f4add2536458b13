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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/util.hpp"

// Character-level typo attacks: at most one character edit per word and at
// most four edited words per sentence.
namespace evoke {

inline constexpr std::size_t kMaxAttackedWords = 4;

enum class CharEdit { substitute, remove, insert, swap };

// True iff `a` and `b` are within one substitution, insertion, deletion or
// adjacent transposition of each other.
inline bool within_one_edit(std::string_view a, std::string_view b) {
  if (a == b) return true;
  if (a.size() == b.size()) {
    std::size_t i = 0;
    while (a[i] == b[i]) ++i;
    if (a.substr(i + 1) == b.substr(i + 1)) return true;  // substitution
    return i + 1 < a.size() && a[i] == b[i + 1] && a[i + 1] == b[i] &&
           a.substr(i + 2) == b.substr(i + 2);  // swap
  }
  if (a.size() + 1 == b.size()) std::swap(a, b);
  if (b.size() + 1 != a.size()) return false;
  std::size_t i = 0;
  while (i < b.size() && a[i] == b[i]) ++i;
  return a.substr(i + 1) == b.substr(i);
}

namespace detail {

// Alphanumeric runs and single punctuation characters: "that's" ->
// {"that", "'", "s"}.
inline std::vector<std::string_view> word_segments(std::string_view w) {
  std::vector<std::string_view> segs;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i + 1;
    if (is_alnum(w[i]))
      while (j < w.size() && is_alnum(w[j])) ++j;
    segs.push_back(w.substr(i, j - i));
    i = j;
  }
  return segs;
}

// A word counts as lightly typo'd if it is one edit away as a whole, or if
// its punctuation skeleton is intact and each alphanumeric run is one edit
// away ("that's" -> "tha'cs").
inline bool word_within_budget(std::string_view original, std::string_view perturbed) {
  if (within_one_edit(original, perturbed)) return true;
  const auto a = word_segments(original);
  const auto b = word_segments(perturbed);
  if (a.size() != b.size() || a.size() < 2) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool punct_a = !is_alnum(a[i].front());
    const bool punct_b = !is_alnum(b[i].front());
    if (punct_a != punct_b) return false;
    if (punct_a ? a[i] != b[i] : !within_one_edit(a[i], b[i])) return false;
  }
  return true;
}

struct WordSpan {
  std::size_t begin;
  std::size_t size;
};

inline std::vector<WordSpan> word_spans(std::string_view s) {
  std::vector<WordSpan> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) spans.push_back({i, j - i});
    i = j;
  }
  return spans;
}

inline bool attackable(std::string_view word) {
  if (word.size() < 2) return false;
  for (unsigned char c : word)
    if (c >= 0x80) return false;
  return true;
}

inline char random_letter(Rng& rng) { return static_cast<char>('a' + rng.below(26)); }

inline std::string edit_word(std::string word, Rng& rng) {
  std::vector<std::size_t> swappable;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (word[i] != word[i + 1]) swappable.push_back(i);
  std::vector<CharEdit> kinds = {CharEdit::substitute, CharEdit::remove, CharEdit::insert};
  if (!swappable.empty()) kinds.push_back(CharEdit::swap);
  // Draw over all four classes; a swap with nothing to swap redraws.
  CharEdit kind = static_cast<CharEdit>(rng.below(4));
  if (kind == CharEdit::swap && swappable.empty()) kind = kinds[rng.below(kinds.size())];
  switch (kind) {
    case CharEdit::substitute: {
      const std::size_t pos = rng.below(word.size());
      const char cur = word[pos];
      if (cur >= 'a' && cur <= 'z') {
        const auto k = rng.below(25);
        word[pos] = static_cast<char>('a' + k + (static_cast<char>('a' + k) >= cur ? 1 : 0));
      } else {
        word[pos] = random_letter(rng);
      }
      break;
    }
    case CharEdit::remove:
      word.erase(rng.below(word.size()), 1);
      break;
    case CharEdit::insert: {
      const std::size_t pos = rng.below(word.size() + 1);
      word.insert(word.begin() + static_cast<std::ptrdiff_t>(pos), random_letter(rng));
      break;
    }
    case CharEdit::swap: {
      const std::size_t pos = swappable[rng.below(swappable.size())];
      std::swap(word[pos], word[pos + 1]);
      break;
    }
  }
  return word;
}

}  // namespace detail

// Typos up to four randomly chosen words (length >= 2), one character edit
// each. Whitespace is preserved byte for byte.
inline std::string attack(std::string_view sentence, std::uint64_t seed) {
  const auto spans = detail::word_spans(sentence);
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < spans.size(); ++i)
    if (detail::attackable(sentence.substr(spans[i].begin, spans[i].size))) targets.push_back(i);
  if (targets.empty()) throw NothingToAttack("no word of length >= 2");
  Rng rng(seed);
  std::vector<std::optional<std::string>> replaced(spans.size());
  for (std::size_t t : rng.sample_indices(targets.size(), kMaxAttackedWords)) {
    const auto& sp = spans[targets[t]];
    replaced[targets[t]] = detail::edit_word(std::string(sentence.substr(sp.begin, sp.size)), rng);
  }
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    out += sentence.substr(cursor, spans[i].begin - cursor);
    out += replaced[i] ? *replaced[i] : sentence.substr(spans[i].begin, spans[i].size);
    cursor = spans[i].begin + spans[i].size;
  }
  out += sentence.substr(cursor);
  return out;
}

// Number of whitespace-aligned words that differ, or nullopt if the pair
// does not align (word counts differ, or some word exceeds one edit).
inline std::optional<std::size_t> changed_words(std::string_view original,
                                                std::string_view perturbed) {
  const auto a = split_whitespace(original);
  const auto b = split_whitespace(perturbed);
  if (a.size() != b.size()) return std::nullopt;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (!detail::word_within_budget(a[i], b[i])) return std::nullopt;
    ++changed;
  }
  return changed;
}

inline bool verify_attack_constraints(std::string_view original, std::string_view perturbed) {
  const auto n = changed_words(original, perturbed);
  return n && *n <= kMaxAttackedWords;
}

struct AttackedDataset {
  std::vector<Example> examples;
  std::vector<std::string> unperturbed;  // original ids with nothing to attack
};

// Which tab-separated segments of `input` a field list selects.
inline std::vector<std::size_t> selected_segments(const std::vector<std::string>& fields,
                                                  std::size_t segment_count) {
  std::vector<bool> chosen(segment_count, false);
  for (const auto& f : fields) {
    if (f == "input") {
      std::fill(chosen.begin(), chosen.end(), true);
    } else if (f.rfind("input.", 0) == 0) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(f.substr(6));
      } catch (const std::exception&) {
        throw ConfigError("bad attack field: " + f);
      }
      if (idx < segment_count) chosen[idx] = true;
    } else {
      throw ConfigError("unknown attack field: " + f + " (use input or input.N)");
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < segment_count; ++i)
    if (chosen[i]) out.push_back(i);
  return out;
}

inline AttackedDataset attack_dataset(const std::vector<Example>& dataset, std::uint64_t seed,
                                      const std::vector<std::string>& fields = {"input"}) {
  AttackedDataset out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Example& ex = dataset[i];
    auto segments = split(ex.input, '\t');
    bool perturbed = false;
    for (std::size_t s : selected_segments(fields, segments.size())) {
      try {
        segments[s] = attack(segments[s], derive_seed(seed ^ i, s));
        perturbed = true;
      } catch (const NothingToAttack&) {
      } catch (const PreconditionError&) {
      }
    }
    if (!perturbed) out.unperturbed.push_back(ex.id);
    out.examples.push_back({ex.id + "-adv", join(segments, "\t"), ex.gold_output});
  }
  return out;
}

// Segment-wise check for attack_dataset output.
inline bool verify_example_attack(const Example& original, const Example& perturbed) {
  if (original.gold_output != perturbed.gold_output) return false;
  const auto a = split(original.input, '\t');
  const auto b = split(perturbed.input, '\t');
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!verify_attack_constraints(a[i], b[i])) return false;
  return true;
}

}  // namespace evoke
