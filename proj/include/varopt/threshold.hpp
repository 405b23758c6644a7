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

#ifndef VAROPT_THRESHOLD_HPP_
#define VAROPT_THRESHOLD_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "varopt/types.hpp"

namespace varopt {

// The ipps threshold: the unique tau > 0 with sum_i min(1, w_i / tau) = k,
// or 0 when k >= n. Computed in closed form from a descending sort: the
// h largest weights are kept whole and tau = (rest) / (k - h) for the
// smallest h under which the largest remaining weight is <= tau.
double ipps_threshold(std::span<const double> weights, std::size_t k);

// min(1, weight / tau), with tau = 0 meaning "everything is included".
double inclusion_probability(double weight, double tau);

struct DropResult {
  std::size_t dropped = 0;  // index into the input span
  std::vector<SampleEntry> survivors;
};

// One VarOpt_{k,k+1} step. `entries` holds k+1 records in drop order; the
// unit interval is cut into consecutive segments of size
// q_i = max(0, 1 - adjusted_i / tau_new) in that order and the entry whose
// segment contains `r` is dropped. Survivors below tau_new are raised to it.
//
// Throws InternalError when the segments do not cover (0,1) to 1e-9.
DropResult select_drop(std::span<const SampleEntry> entries, double tau_new,
                       double r);

// Canonical drop order: ascending adjusted weight, ties by arrival index.
// Returns a permutation of [0, adjusted.size()).
std::vector<std::size_t> canonical_drop_order(
    std::span<const double> adjusted,
    std::span<const std::uint64_t> arrival);

}  // namespace varopt

#endif  // VAROPT_THRESHOLD_HPP_
