// Copyright 2026 The Satpath Authors
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

#ifndef SATPATH_COMMON_H_
#define SATPATH_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satpath {

// Entry tolerance for probability vectors; also the equality tolerance used
// when deciding whether a player kept its strategy between two steps.
inline constexpr double kSimplexTolerance = 1e-9;

// Absorbs floating-point rounding underneath the semantic epsilon in every
// best-response comparison.
inline constexpr double kRoundingSlack = 1e-12;

// Dense payoff tensors (players x joint actions) are capped at this size.
inline constexpr std::size_t kMaxTensorEntries = 10'000'000;

enum class ErrorKind {
  kStructural,     // dimension mismatch, malformed partition, bad indices
  kInvalidArgument,
  kBudget,         // a size or iteration budget would be exceeded
  kSolverFailure,
  kSchema,         // malformed JSON input
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library is a satpath::Error.  The CLI maps all
// of them to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) Fail(kind, message);
}

}  // namespace satpath

#endif  // SATPATH_COMMON_H_
