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

#ifndef VAROPT_MERGE_HPP_
#define VAROPT_MERGE_HPP_

#include <cstddef>
#include <span>

#include "varopt/random.hpp"
#include "varopt/types.hpp"

namespace varopt {

// Combines independent samples of disjoint item sets into one sample of
// capacity k. The union of all entries is streamed, in key order, through
// a fresh capacity-k reservoir with each adjusted weight used as the
// item's weight. In the result, original_weight is the weight the merge
// was fed (the input's adjusted weight). Totals and item counts add up.
//
// A single input with at most k entries is returned unchanged apart from
// its capacity.
//
// Throws PreconditionError if some input has capacity_k < k and
// DomainError on k = 0 or on a key present in two inputs.
Sample merge(std::span<const Sample> samples, std::size_t k,
             RandomSource& rng);

}  // namespace varopt

#endif  // VAROPT_MERGE_HPP_
