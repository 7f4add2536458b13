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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evoke {

// Root of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---- backend errors --------------------------------------------------------

class BackendError : public Error {
 public:
  using Error::Error;
};

// Retryable failure: HTTP 429/5xx, timeouts, dropped connections.
class TransientError : public BackendError {
 public:
  using BackendError::BackendError;
};

// HTTP 401/403. Never retried.
class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

class BudgetExceeded : public BackendError {
 public:
  using BackendError::BackendError;
};

// A single complete() call used up max_retries.
class RetriesExhausted : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

// The run-level cap on total backend calls was reached.
class CallBudgetExceeded : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class MalformedResponse : public BackendError {
 public:
  using BackendError::BackendError;
};

class NoScriptMatch : public MalformedResponse {
 public:
  using MalformedResponse::MalformedResponse;
};

// Every call of an evaluation pass failed.
class BackendDown : public BackendError {
 public:
  using BackendError::BackendError;
};

// ---- parse / data errors ---------------------------------------------------

class LineError : public Error {
 public:
  LineError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ScriptParseError : public LineError {
 public:
  using LineError::LineError;
};

class ParseError : public LineError {
 public:
  using LineError::LineError;
};

class DuplicateId : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class TooFewExamples : public Error {
 public:
  using Error::Error;
};

class ScoreParseError : public Error {
 public:
  using Error::Error;
};

class EmptyInstruction : public Error {
 public:
  using Error::Error;
};

class EmptyPairs : public Error {
 public:
  using Error::Error;
};

class EmptyRatings : public Error {
 public:
  using Error::Error;
};

class NothingToAttack : public Error {
 public:
  using Error::Error;
};

class StateCorrupt : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace evoke
