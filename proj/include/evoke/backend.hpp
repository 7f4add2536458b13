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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>

#include "evoke/backend_config.hpp"
#include "evoke/errors.hpp"
#include "evoke/util.hpp"

namespace evoke {

enum class RoleTag { author, reviewer, selector, task_eval, induction, paraphrase };

inline std::string to_string(RoleTag t) {
  switch (t) {
    case RoleTag::author: return "author";
    case RoleTag::reviewer: return "reviewer";
    case RoleTag::selector: return "selector";
    case RoleTag::task_eval: return "task_eval";
    case RoleTag::induction: return "induction";
    case RoleTag::paraphrase: return "paraphrase";
  }
  return "?";
}

inline RoleTag parse_tag(std::string_view s) {
  if (s == "author") return RoleTag::author;
  if (s == "reviewer") return RoleTag::reviewer;
  if (s == "selector") return RoleTag::selector;
  if (s == "task_eval") return RoleTag::task_eval;
  if (s == "induction") return RoleTag::induction;
  if (s == "paraphrase") return RoleTag::paraphrase;
  throw ConfigError("unknown role tag: " + std::string(s));
}

struct ChatRequest {
  std::optional<std::string> system;
  std::string user;
  double temperature = 0.0;
  int max_tokens = 512;
  RoleTag tag = RoleTag::task_eval;
  // Index of this call among otherwise identical sampling calls (author and
  // paraphrase candidates). Part of the request content.
  int sample = 0;
  // Set by the retry layer; not part of the content.
  int attempt = 0;
};

// Stable digest of everything that identifies a request's content.
inline std::uint64_t content_hash(const ChatRequest& r) {
  std::uint64_t h = fnv1a64(to_string(r.tag));
  h = fnv1a64("\x1f", h);
  h = fnv1a64(r.system.value_or(""), h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(r.user, h);
  h = fnv1a64("\x1f" + std::to_string(r.sample), h);
  return h;
}

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct ChatResponse {
  std::string text;
  std::optional<Usage> usage;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Must be safe to call concurrently.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// ---- retry -----------------------------------------------------------------

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{30000};
};

inline std::chrono::milliseconds backoff_delay(const RetryPolicy& p, int retry,
                                               double jitter_unit) {
  const double base = static_cast<double>(p.backoff_base.count());
  const double exp = base * static_cast<double>(1ULL << std::min(retry, 20));
  const double capped = std::min(exp, static_cast<double>(p.backoff_cap.count()));
  // Full jitter over the upper half: delay in [capped/2, capped].
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(capped / 2 + capped / 2 * jitter_unit));
}

// Calls `attempt_fn(attempt)` until it returns without a TransientError, at
// most max_retries + 1 times. Other exceptions pass through immediately.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& attempt_fn) {
  thread_local std::minstd_rand jitter{std::random_device{}()};
  for (int attempt = 0;; ++attempt) {
    try {
      return attempt_fn(attempt);
    } catch (const TransientError& e) {
      if (attempt >= policy.max_retries)
        throw RetriesExhausted(std::string("retries exhausted after ") +
                               std::to_string(attempt + 1) + " attempts: " + e.what());
      const double u = static_cast<double>(jitter() - jitter.min()) /
                       static_cast<double>(jitter.max() - jitter.min());
      const auto delay = backoff_delay(policy, attempt, u);
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
    }
  }
}

// Adds retry semantics to a backend whose failures are TransientError.
class RetryingBackend : public ChatBackend {
 public:
  RetryingBackend(std::shared_ptr<ChatBackend> inner, RetryPolicy policy)
      : inner_(std::move(inner)), policy_(policy) {}

  ChatResponse complete(const ChatRequest& request) override {
    return with_retries(policy_, [&](int attempt) {
      ChatRequest r = request;
      r.attempt = attempt;
      return inner_->complete(r);
    });
  }

 private:
  std::shared_ptr<ChatBackend> inner_;
  RetryPolicy policy_;
};

// Counts calls and tokens; enforces an optional cap on total calls.
class CountingBackend : public ChatBackend {
 public:
  explicit CountingBackend(std::shared_ptr<ChatBackend> inner,
                           std::optional<std::uint64_t> max_calls = std::nullopt,
                           std::uint64_t already_issued = 0)
      : inner_(std::move(inner)), max_calls_(max_calls), calls_(already_issued) {}

  ChatResponse complete(const ChatRequest& request) override {
    const std::uint64_t n = ++calls_;
    if (max_calls_ && n > *max_calls_) {
      --calls_;
      throw CallBudgetExceeded("call budget of " + std::to_string(*max_calls_) +
                               " backend calls exhausted");
    }
    ChatResponse resp = inner_->complete(request);
    if (resp.usage) {
      prompt_tokens_ += resp.usage->prompt_tokens;
      completion_tokens_ += resp.usage->completion_tokens;
    }
    return resp;
  }

  std::uint64_t calls() const { return calls_; }
  std::int64_t prompt_tokens() const { return prompt_tokens_; }
  std::int64_t completion_tokens() const { return completion_tokens_; }
  void add_tokens(std::int64_t prompt, std::int64_t completion) {
    prompt_tokens_ += prompt;
    completion_tokens_ += completion;
  }

 private:
  std::shared_ptr<ChatBackend> inner_;
  std::optional<std::uint64_t> max_calls_;
  std::atomic<std::uint64_t> calls_;
  std::atomic<std::int64_t> prompt_tokens_{0};
  std::atomic<std::int64_t> completion_tokens_{0};
};

// ---- rate limiting ---------------------------------------------------------

// Admits at most `limit` acquisitions in any sliding window of `window`.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(int limit, Clock::duration window = std::chrono::seconds(60))
      : limit_(static_cast<std::size_t>(limit)), window_(window) {
    if (limit < 1) throw ConfigError("rate limit must be >= 1");
  }

  // Blocks until issuing one more request keeps the window bound.
  void acquire() {
    std::unique_lock lock(mu_);
    for (;;) {
      const auto now = Clock::now();
      while (!issued_.empty() && now - issued_.front() >= window_) issued_.pop_front();
      if (issued_.size() < limit_) {
        issued_.push_back(now);
        return;
      }
      const auto wake = issued_.front() + window_;
      lock.unlock();
      std::this_thread::sleep_until(wake);
      lock.lock();
    }
  }

 private:
  std::size_t limit_;
  Clock::duration window_;
  std::mutex mu_;
  std::deque<Clock::time_point> issued_;
};

}  // namespace evoke
