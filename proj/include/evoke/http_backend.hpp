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

#include <cstdlib>
#include <memory>
#include <optional>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "evoke/backend.hpp"
#include "evoke/backend_config.hpp"
#include "evoke/errors.hpp"
#include "evoke/scripted_backend.hpp"

namespace evoke {

struct ParsedEndpoint {
  std::string origin;  // scheme://host[:port]
  std::string path_prefix;
};

inline ParsedEndpoint parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint must start with http:// or https://: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https")
    throw ConfigError("unsupported endpoint scheme: " + scheme);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https")
    throw ConfigError("https endpoints need a build with OpenSSL support");
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedEndpoint out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.path_prefix = url.substr(path_start);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/')
    out.path_prefix.pop_back();
  return out;
}

inline nlohmann::json chat_request_body(const std::string& model, const ChatRequest& r) {
  nlohmann::json messages = nlohmann::json::array();
  if (r.system) messages.push_back({{"role", "system"}, {"content", *r.system}});
  messages.push_back({{"role", "user"}, {"content", r.user}});
  return {{"model", model},
          {"messages", messages},
          {"temperature", r.temperature},
          {"max_tokens", r.max_tokens}};
}

inline ChatResponse parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedResponse(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    ChatResponse resp;
    resp.text = content.is_null() ? "" : content.get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
      Usage u;
      u.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      u.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
      resp.usage = u;
    }
    return resp;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("unexpected response shape: ") + e.what());
  }
}

// OpenAI-compatible chat-completions client:
// POST {endpoint}/chat/completions, answer at choices[0].message.content.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(BackendConfig config)
      : config_(std::move(config)), endpoint_(parse_endpoint(config_.endpoint)) {
    if (config_.model.empty()) throw ConfigError("http backend requires a model");
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
    if (config_.requests_per_minute)
      limiter_ = std::make_unique<RateLimiter>(*config_.requests_per_minute);
    policy_.max_retries = config_.max_retries;
    policy_.backoff_base = config_.backoff_base;
  }

  ChatResponse complete(const ChatRequest& request) override {
    const std::string body = chat_request_body(config_.model, request).dump();
    return with_retries(policy_, [&](int) { return issue(body); });
  }

  std::uint64_t requests_issued() const { return issued_; }

 private:
  ChatResponse issue(const std::string& body) {
    if (limiter_) limiter_->acquire();
    ++issued_;
    httplib::Client client(endpoint_.origin);
    const auto secs = [](std::chrono::milliseconds ms) {
      return std::chrono::duration_cast<std::chrono::microseconds>(ms);
    };
    client.set_connection_timeout(secs(config_.timeout));
    client.set_read_timeout(secs(config_.timeout));
    client.set_write_timeout(secs(config_.timeout));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(endpoint_.path_prefix + "/chat/completions", headers, body,
                           "application/json");
    if (!res)
      throw TransientError("request failed: " + httplib::to_string(res.error()));
    const int status = res->status;
    if (status == 401 || status == 403)
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
    if (status == 429 || status >= 500)
      throw TransientError("HTTP " + std::to_string(status));
    if (status != 200)
      throw BackendError("HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200));
    return parse_chat_response(res->body);
  }

  BackendConfig config_;
  ParsedEndpoint endpoint_;
  std::string api_key_;
  RetryPolicy policy_;
  std::unique_ptr<RateLimiter> limiter_;
  std::atomic<std::uint64_t> issued_{0};
};

// Builds the backend stack described by `config`.
inline std::shared_ptr<ChatBackend> make_backend(const BackendConfig& config) {
  validate(config);
  if (config.kind == BackendKind::http) return std::make_shared<HttpBackend>(config);
  std::shared_ptr<ChatBackend> backend =
      std::make_shared<ScriptedBackend>(load_script(*config.script_path));
  if (config.faults) backend = std::make_shared<FaultyBackend>(backend, *config.faults);
  RetryPolicy policy;
  policy.max_retries = config.max_retries;
  policy.backoff_base = std::chrono::milliseconds(0);
  return std::make_shared<RetryingBackend>(backend, policy);
}

}  // namespace evoke
