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

#ifndef VAROPT_RANDOM_HPP_
#define VAROPT_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace varopt {

// Seedable source of uniforms strictly inside (0,1). The conversion from
// engine output is done by hand so that a given seed yields the same
// sequence on every standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  // Uniform in the open interval (0,1): (m + 0.5) / 2^53 for a 53-bit m.
  double uniform() {
    ++draws_;
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Requires n > 0.
  std::size_t uniform_index(std::size_t n);

  // Standard exponential variate.
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed for a named purpose, e.g. derive_seed(seed, "trial", 17). Adding a
// new purpose or trial never perturbs the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

}  // namespace varopt

#endif  // VAROPT_RANDOM_HPP_
