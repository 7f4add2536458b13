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

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoke/backend.hpp"
#include "evoke/errors.hpp"
#include "evoke/util.hpp"

namespace evoke {

enum class MatchKind { any, contains, exact, hash };

// One line of a script. Rules are tried in file order; the first whose
// filters all accept the request answers it.
struct ScriptRule {
  std::optional<RoleTag> tag;
  MatchKind match = MatchKind::any;
  // contains: every pattern must occur; exact/hash: patterns[0].
  std::vector<std::string> patterns;
  std::optional<int> sample;
  std::string response;

  bool accepts(const ChatRequest& r) const {
    if (tag && *tag != r.tag) return false;
    if (sample && *sample != r.sample) return false;
    switch (match) {
      case MatchKind::any:
        return true;
      case MatchKind::contains:
        for (const auto& p : patterns)
          if (r.user.find(p) == std::string::npos) return false;
        return true;
      case MatchKind::exact:
        return r.user == patterns.at(0);
      case MatchKind::hash:
        return text_hash(r.user) == patterns.at(0);
    }
    return false;
  }
};

inline nlohmann::ordered_json rule_to_json(const ScriptRule& rule) {
  nlohmann::ordered_json j;
  if (rule.tag) j["tag"] = to_string(*rule.tag);
  switch (rule.match) {
    case MatchKind::any: j["match"] = "any"; break;
    case MatchKind::contains:
      if (rule.patterns.size() == 1)
        j["match"] = {{"contains", rule.patterns[0]}};
      else
        j["match"] = {{"contains", rule.patterns}};
      break;
    case MatchKind::exact: j["match"] = {{"exact", rule.patterns.at(0)}}; break;
    case MatchKind::hash: j["match"] = {{"hash", rule.patterns.at(0)}}; break;
  }
  if (rule.sample) j["sample"] = *rule.sample;
  j["response"] = rule.response;
  return j;
}

class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptRule> rules,
                           std::optional<std::string> fallback = std::nullopt)
      : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

  ChatResponse complete(const ChatRequest& request) override {
    for (const auto& rule : rules_)
      if (rule.accepts(request)) return {rule.response, std::nullopt};
    if (fallback_) return {*fallback_, std::nullopt};
    throw NoScriptMatch("no script rule matches " + to_string(request.tag) +
                        " request " + text_hash(request.user));
  }

  const std::vector<ScriptRule>& rules() const { return rules_; }
  const std::optional<std::string>& fallback() const { return fallback_; }

  // Canonical JSON-lines form; parse_script(to_script()) reproduces *this.
  std::string to_script() const {
    std::string out;
    for (const auto& r : rules_) out += rule_to_json(r).dump() + "\n";
    if (fallback_) out += nlohmann::ordered_json{{"default", *fallback_}}.dump() + "\n";
    return out;
  }

 private:
  std::vector<ScriptRule> rules_;
  std::optional<std::string> fallback_;
};

namespace detail {

inline ScriptRule parse_rule(const nlohmann::json& j, std::size_t line) {
  auto fail = [line](const std::string& msg) -> ScriptParseError {
    return ScriptParseError(msg, line);
  };
  ScriptRule rule;
  for (const auto& [key, _] : j.items())
    if (key != "tag" && key != "match" && key != "sample" && key != "response")
      throw fail("unknown rule key '" + key + "'");
  if (j.contains("tag")) {
    if (!j["tag"].is_string()) throw fail("tag must be a string");
    const std::string t = j["tag"];
    if (t != "any") {
      try {
        rule.tag = parse_tag(t);
      } catch (const ConfigError& e) {
        throw fail(e.what());
      }
    }
  }
  if (!j.contains("response") || !j["response"].is_string())
    throw fail("rule needs a string 'response'");
  rule.response = j["response"];
  if (j.contains("sample")) {
    if (!j["sample"].is_number_integer()) throw fail("sample must be an integer");
    rule.sample = j["sample"].get<int>();
  }
  if (!j.contains("match") || (j["match"].is_string() && j["match"] == "any")) {
    rule.match = MatchKind::any;
    return rule;
  }
  const auto& m = j["match"];
  if (!m.is_object() || m.size() != 1)
    throw fail("match must be \"any\" or an object with one of contains/exact/hash");
  const auto& [kind, value] = *m.items().begin();
  if (kind == "contains") {
    rule.match = MatchKind::contains;
    if (value.is_string()) {
      rule.patterns.push_back(value.get<std::string>());
    } else if (value.is_array() && !value.empty()) {
      for (const auto& v : value) {
        if (!v.is_string()) throw fail("contains patterns must be strings");
        rule.patterns.push_back(v.get<std::string>());
      }
    } else {
      throw fail("contains needs a string or a non-empty array of strings");
    }
  } else if (kind == "exact" || kind == "hash") {
    if (!value.is_string()) throw fail(kind + " needs a string");
    rule.match = kind == "exact" ? MatchKind::exact : MatchKind::hash;
    rule.patterns.push_back(value.get<std::string>());
  } else {
    throw fail("unknown match kind '" + kind + "'");
  }
  return rule;
}

}  // namespace detail

// Parses a JSON-lines script. Blank lines and lines starting with '#' are
// skipped. A line {"default": "..."} sets the fallback answer.
inline ScriptedBackend parse_script(std::string_view text) {
  std::vector<ScriptRule> rules;
  std::optional<std::string> fallback;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim_view(raw);
    if (line.empty() || line.front() == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ScriptParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ScriptParseError("rule must be a JSON object", line_no);
    if (j.contains("default")) {
      if (j.size() != 1 || !j["default"].is_string())
        throw ScriptParseError("default line must be {\"default\": \"text\"}", line_no);
      if (fallback) throw ScriptParseError("duplicate default rule", line_no);
      fallback = j["default"].get<std::string>();
      continue;
    }
    rules.push_back(detail::parse_rule(j, line_no));
  }
  return ScriptedBackend(std::move(rules), std::move(fallback));
}

inline ScriptedBackend load_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open script " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

// Fails a deterministic fraction of attempts. The decision is a pure
// function of (seed, request content, attempt), so it holds under any
// interleaving of concurrent calls.
class FaultyBackend : public ChatBackend {
 public:
  FaultyBackend(std::shared_ptr<ChatBackend> inner, FaultInjection faults)
      : inner_(std::move(inner)), faults_(std::move(faults)) {}

  ChatResponse complete(const ChatRequest& request) override {
    if (should_fail(request)) {
      const bool transient =
          faults_.mode == FaultMode::transient ||
          (faults_.mode == FaultMode::mixed && (draw(request, 1) & 1) == 0);
      if (transient) throw TransientError("injected transient failure");
      return {"", std::nullopt};
    }
    return inner_->complete(request);
  }

 private:
  std::uint64_t draw(const ChatRequest& r, std::uint64_t salt) const {
    return derive_seed(faults_.seed ^ content_hash(r),
                       static_cast<std::uint64_t>(r.attempt) * 2 + salt);
  }

  bool should_fail(const ChatRequest& r) const {
    if (faults_.only_tag && *faults_.only_tag != to_string(r.tag)) return false;
    if (r.attempt >= faults_.max_consecutive) return false;
    const double u = static_cast<double>(draw(r, 0) >> 11) * 0x1.0p-53;
    return u < faults_.rate;
  }

  std::shared_ptr<ChatBackend> inner_;
  FaultInjection faults_;
};

}  // namespace evoke
