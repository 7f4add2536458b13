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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "evoke/errors.hpp"

namespace evoke {

enum class BackendKind { http, scripted };

// Deterministic failure injection layered over a scripted backend.
// `transient` throws a retryable error, `empty` answers with an empty
// completion, `mixed` picks one of the two per failure.
enum class FaultMode { mixed, transient, empty };

struct FaultInjection {
  FaultMode mode = FaultMode::mixed;
  double rate = 0.0;          // per-attempt failure probability
  std::uint64_t seed = 0;
  int max_consecutive = 2;    // attempts >= this index always succeed
  std::optional<std::string> only_tag;  // restrict to one role tag
};

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  std::optional<int> requests_per_minute;
  std::optional<std::string> script_path;
  std::chrono::milliseconds backoff_base{500};
  std::optional<FaultInjection> faults;
};

inline void validate(const BackendConfig& c) {
  if (c.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (c.kind == BackendKind::http && (c.endpoint.empty() || c.model.empty()))
    throw ConfigError("http backend requires endpoint and model");
  if (c.kind == BackendKind::scripted && !c.script_path)
    throw ConfigError("scripted backend requires script_path");
  if (c.requests_per_minute && *c.requests_per_minute < 1)
    throw ConfigError("requests_per_minute must be >= 1");
  if (c.faults && !(c.faults->rate >= 0.0 && c.faults->rate <= 1.0))
    throw ConfigError("fault rate must be in [0,1]");
}

}  // namespace evoke
