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

#ifndef VAROPT_EMPIRICAL_HPP_
#define VAROPT_EMPIRICAL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "varopt/random.hpp"
#include "varopt/types.hpp"
#include "varopt/variance.hpp"

namespace varopt {

// Any sampling scheme: items and a capacity in, a sample out.
using Scheme = std::function<Sample(std::span<const WeightedItem>,
                                    std::size_t, RandomSource&)>;

// Seed of trial `index` under a base seed.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

// Runs `trials` independent samples and hands each trial's per-item
// estimates (aligned with `items`, zero when unsampled) to `visit`, in
// trial order. Throws DomainError if a sample holds an unknown key.
void run_trials(
    const Scheme& scheme, std::span<const WeightedItem> items, std::size_t k,
    std::size_t trials, std::uint64_t seed,
    const std::function<void(std::size_t, std::span<const double>)>& visit);

struct EmpiricalOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  // Cell id per item for the sum of squared errors; empty means a single
  // cell holding every item.
  std::vector<std::size_t> partition;
  // Pairwise covariances are computed when n <= this.
  std::size_t covariance_limit = 64;
  // 0 picks std::thread::hardware_concurrency(). Results do not depend on
  // the thread count.
  std::size_t threads = 0;
};

struct EmpiricalReport {
  VarianceReport variance;               // empirical SigmaV and VSigma
  std::vector<double> mean;              // per-item mean estimate
  std::vector<double> item_variance;     // per-item sample variance
  std::vector<double> inclusion_frequency;
  std::vector<double> covariance;        // n x n row-major, or empty
  double total_mean = 0.0;               // mean estimated grand total
  double sse_mean = 0.0;  // mean over trials of sum over cells of error^2

  double cov(std::size_t i, std::size_t j) const {
    return covariance[i * mean.size() + j];
  }
};

// Sample variances use the trial mean and a (trials - 1) denominator, so a
// single trial reports zero variance.
EmpiricalReport empirical_report(const Scheme& scheme,
                                 std::span<const WeightedItem> items,
                                 std::size_t k,
                                 const EmpiricalOptions& options);

}  // namespace varopt

#endif  // VAROPT_EMPIRICAL_HPP_
