// Copyright 2026 The VarOpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAROPT_ERRORS_HPP_
#define VAROPT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varopt {

// Invalid argument values: nonpositive weights, k = 0, duplicate keys.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller-side contract violations that are not about a single value,
// e.g. merging a sample whose capacity is below the target capacity.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Violated numerical invariants inside the sampler.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed serialized input. `position()` is a byte offset for binary
// input and a 1-based line number for text input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace varopt

#endif  // VAROPT_ERRORS_HPP_
