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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evoke/backend.hpp"
#include "evoke/core.hpp"
#include "evoke/errors.hpp"
#include "evoke/templates.hpp"
#include "evoke/util.hpp"

namespace evoke {

// An example the current prompt got wrong, as shown to the author.
struct ErrorTriple {
  std::string input;
  std::string gold;
  std::string student_response;

  friend bool operator==(const ErrorTriple&, const ErrorTriple&) = default;
};

inline std::string render_pairs_block(const std::vector<ErrorTriple>& pairs) {
  std::vector<std::string> blocks;
  blocks.reserve(pairs.size());
  for (const auto& p : pairs)
    blocks.push_back("Input: " + p.input + "\nCorrect answer: " + p.gold +
                     "\nStudent response: " + p.student_response);
  return "\n" + join(blocks, "\n\n");
}

// One line per entry, oldest first, newest `cap` entries kept.
template <typename Entry, typename LineFn>
std::string render_memory_block(const std::vector<Entry>& memory,
                                std::optional<std::size_t> cap, LineFn&& line) {
  std::size_t first = 0;
  if (cap && memory.size() > *cap) first = memory.size() - *cap;
  if (first >= memory.size()) return std::string(templates::kEmptyMemory);
  std::string out;
  for (std::size_t i = first; i < memory.size(); ++i) out += "\n" + line(memory[i]);
  return out;
}

inline std::string author_memory_line(const AuthorMemoryEntry& e) {
  return "[" + collapse_whitespace(e.edit.summary) + "] \xE2\x86\x92 reviewer score " +
         e.reviewer_score.str();
}

inline ChatRequest render_author_prompt(const Prompt& current,
                                        const std::vector<ErrorTriple>& pairs,
                                        const std::vector<AuthorMemoryEntry>& memory,
                                        std::optional<std::size_t> memory_cap = std::nullopt,
                                        const Sampling& sampling = {}) {
  if (pairs.empty()) throw EmptyPairs("author prompt needs at least one pair");
  ChatRequest r;
  r.user = fill_template(
      templates::kAuthor,
      {{"instruction", current.text},
       {"pairs", render_pairs_block(pairs)},
       {"memory", render_memory_block(memory, memory_cap, author_memory_line)}});
  r.tag = RoleTag::author;
  r.temperature = sampling.author_temperature;
  r.max_tokens = sampling.author_max_tokens;
  return r;
}

namespace detail {

struct HeaderHit {
  std::size_t line_begin;  // start of the header's line
  std::size_t content;     // first character after the header decoration
};

inline bool is_decoration(char c) {
  return c == '#' || c == '*' || c == '_' || c == ':' || c == '>' || c == '-' ||
         c == ' ' || c == '\t';
}

// Every line whose text, after leading decoration, starts with `phrase`.
inline std::vector<HeaderHit> find_headers(std::string_view text, std::string_view phrase) {
  std::vector<HeaderHit> hits;
  std::size_t line = 0;
  while (line <= text.size()) {
    std::size_t end = text.find('\n', line);
    if (end == std::string_view::npos) end = text.size();
    std::size_t i = line;
    while (i < end && is_decoration(text[i])) ++i;
    if (iequals_at(text, i, phrase)) {
      std::size_t c = i + phrase.size();
      if (c < end && text[c] == 's' && phrase.back() != 's') ++c;  // "instructions"
      while (c < end && is_decoration(text[c])) ++c;
      hits.push_back({line, c});
    }
    line = end + 1;
  }
  return hits;
}

}  // namespace detail

struct ExtractedEdit {
  std::string instruction;
  std::string edit_summary;

  friend bool operator==(const ExtractedEdit&, const ExtractedEdit&) = default;
};

inline constexpr std::string_view kUnstructuredEdit = "(unstructured edit)";
inline constexpr std::string_view kNoOpEdit = "(no-op)";

// Splits an author response into the updated instruction (after the last
// "updated task instruction" header) and the summary of edits (after the
// last "major edits" header before it, else the whole preamble).
inline ExtractedEdit extract_updated_instruction(std::string_view raw) {
  const auto instr_hits = detail::find_headers(raw, "updated task instruction");
  ExtractedEdit out;
  if (instr_hits.empty()) {
    out.instruction = trim(raw);
    out.edit_summary = kUnstructuredEdit;
  } else {
    const auto& h = instr_hits.back();
    out.instruction = trim(raw.substr(h.content));
    const std::string_view preamble = raw.substr(0, h.line_begin);
    const auto edit_hits = detail::find_headers(preamble, "major edits");
    out.edit_summary = edit_hits.empty() ? trim(preamble)
                                         : trim(preamble.substr(edit_hits.back().content));
    if (out.edit_summary.empty()) out.edit_summary = kUnstructuredEdit;
  }
  if (out.instruction.empty()) throw EmptyInstruction("author response has no instruction");
  return out;
}

struct Candidate {
  Prompt prompt;
  EditRecord edit;
};

inline std::string candidate_id(int iteration, std::size_t index) {
  return "t" + std::to_string(iteration) + "-c" + std::to_string(index);
}

namespace detail {

// Parses each response, drops failures and normalized duplicates, and
// falls back to passing `current` through when nothing survives.
template <typename ParseFn>
std::vector<Candidate> collect_candidates(const Prompt& current,
                                          const std::vector<std::string>& responses,
                                          PromptOrigin origin, ParseFn&& parse) {
  const int iteration = current.iteration + 1;
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    std::optional<ExtractedEdit> parsed;
    try {
      parsed = parse(responses[i]);
    } catch (const EmptyInstruction&) {
      continue;
    }
    if (!seen.insert(collapse_whitespace(parsed->instruction)).second) continue;
    const std::string id = candidate_id(iteration, i);
    out.push_back({make_child_prompt(current, id, parsed->instruction, origin),
                   make_edit(parsed->edit_summary, id, iteration)});
  }
  if (out.empty()) {
    const std::string id = candidate_id(iteration, 0);
    out.push_back({make_child_prompt(current, id, current.text, origin),
                   make_edit(std::string(kNoOpEdit), id, iteration)});
  }
  return out;
}

}  // namespace detail

// Issues m author calls for `current` and turns them into child prompts.
inline std::vector<Candidate> generate_candidates(
    const Prompt& current, const std::vector<ErrorTriple>& errors,
    const std::vector<AuthorMemoryEntry>& memory, int m, ChatBackend& backend,
    std::optional<std::size_t> memory_cap = std::nullopt, const Sampling& sampling = {},
    std::size_t parallelism = 1) {
  if (m < 1) throw PreconditionError("m must be >= 1");
  const ChatRequest base = render_author_prompt(current, errors, memory, memory_cap, sampling);
  auto responses = parallel_map(static_cast<std::size_t>(m), parallelism, [&](std::size_t i) {
    ChatRequest r = base;
    r.sample = static_cast<int>(i);
    return backend.complete(r).text;
  });
  return detail::collect_candidates(current, responses, PromptOrigin::author_edit,
                                    extract_updated_instruction);
}

inline ChatRequest render_paraphrase_prompt(const Prompt& current, const Sampling& sampling = {}) {
  ChatRequest r;
  r.user = fill_template(templates::kParaphrase, {{"instruction", current.text}});
  r.tag = RoleTag::paraphrase;
  r.temperature = sampling.paraphrase_temperature;
  r.max_tokens = sampling.author_max_tokens;
  return r;
}

// APE-style ablation: rephrase only, no error pairs and no memory.
inline std::vector<Candidate> paraphrase_candidates(const Prompt& current, int m,
                                                    ChatBackend& backend,
                                                    const Sampling& sampling = {},
                                                    std::size_t parallelism = 1) {
  if (m < 1) throw PreconditionError("m must be >= 1");
  const ChatRequest base = render_paraphrase_prompt(current, sampling);
  auto responses = parallel_map(static_cast<std::size_t>(m), parallelism, [&](std::size_t i) {
    ChatRequest r = base;
    r.sample = static_cast<int>(i);
    return backend.complete(r).text;
  });
  return detail::collect_candidates(
      current, responses, PromptOrigin::paraphrase, [](const std::string& raw) {
        std::string text = trim(raw);
        if (text.empty()) throw EmptyInstruction("empty paraphrase");
        return ExtractedEdit{std::move(text), "(paraphrase)"};
      });
}

inline std::string render_induction_prompt(const std::vector<Example>& demos) {
  std::vector<std::string> blocks;
  for (const auto& ex : demos)
    blocks.push_back("Input: " + ex.input + "\nOutput: " + ex.gold_output);
  return fill_template(templates::kInduction, {{"pairs", join(blocks, "\n\n")}});
}

// Strips chatty framing around an induced instruction.
inline std::string clean_induced_instruction(std::string_view raw) {
  std::string s = trim(raw);
  for (std::string_view prefix : {"the instruction was:", "the instruction was",
                                  "instruction:"}) {
    if (iequals_at(s, 0, prefix)) {
      s = trim(std::string_view(s).substr(prefix.size()));
      break;
    }
  }
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = trim(std::string_view(s).substr(1, s.size() - 2));
  return s;
}

// Infers a starting instruction from the first k demonstrations.
inline Prompt induce_initial_prompt(const std::vector<Example>& examples, int k,
                                    ChatBackend& backend, const Sampling& sampling = {},
                                    std::string id = "p0") {
  if (k < 1) throw PreconditionError("induction needs k >= 1 demonstrations");
  if (examples.empty()) throw PreconditionError("induction needs demonstrations");
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), examples.size());
  const std::vector<Example> demos(examples.begin(), examples.begin() + static_cast<std::ptrdiff_t>(n));
  ChatRequest r;
  r.user = render_induction_prompt(demos);
  r.tag = RoleTag::induction;
  r.temperature = sampling.induction_temperature;
  r.max_tokens = sampling.judge_max_tokens;
  const std::string text = clean_induced_instruction(backend.complete(r).text);
  if (text.empty()) throw EmptyInstruction("induction produced an empty instruction");
  return make_root_prompt(std::move(id), text, PromptOrigin::induced);
}

}  // namespace evoke
