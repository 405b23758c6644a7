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

#ifndef VAROPT_BASELINES_HPP_
#define VAROPT_BASELINES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varopt/empirical.hpp"
#include "varopt/random.hpp"
#include "varopt/reservoir.hpp"
#include "varopt/types.hpp"

namespace varopt {

// k distinct items uniformly without replacement, each estimated as
// w * n / k. With k >= n every item is returned at its own weight.
Sample uniform_sample(std::span<const WeightedItem> items, std::size_t k,
                      RandomSource& rng);

// k independent draws proportional to weight; an item drawn at least once
// is estimated as w / p with p = 1 - (1 - w / W)^k.
Sample ppswr_sample(std::span<const WeightedItem> items, std::size_t k,
                    RandomSource& rng);

// Independent inclusion with the ipps probabilities of the full weight set.
// Light items are estimated at the threshold. Expected size k.
Sample poisson_ipps_sample(std::span<const WeightedItem> items,
                           std::size_t k, RandomSource& rng);

// Priority sampling: priority w / u with u uniform, keep the k largest,
// threshold = (k+1)-st largest priority, estimate max(w, threshold).
Sample priority_sample(std::span<const WeightedItem> items, std::size_t k,
                       RandomSource& rng);

// First `count` keys of a probability-proportional-to-size order without
// replacement, drawn with exponential ranks E / w in ascending order.
std::vector<std::string> ppswor_order(std::span<const WeightedItem> items,
                                      std::size_t count, RandomSource& rng);

// Streams the items through a fresh VarOpt_k reservoir.
Sample varopt_sample(std::span<const WeightedItem> items, std::size_t k,
                     RandomSource& rng,
                     Implementation impl = Implementation::kTree,
                     ReservoirOptions options = {});

// "varopt", "varopt_amortized", "varopt_naive", "uniform", "ppswr",
// "poisson", "priority".
std::vector<std::string> scheme_names();
std::optional<Scheme> scheme_by_name(std::string_view name);

}  // namespace varopt

#endif  // VAROPT_BASELINES_HPP_
