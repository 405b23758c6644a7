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

#ifndef VAROPT_INSTANCES_HPP_
#define VAROPT_INSTANCES_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varopt/random.hpp"
#include "varopt/types.hpp"

namespace varopt {

// k - 1 items of weight ell ("L0".."L{k-2}") and ell unit items
// ("u0".."u{ell-1}"). Throws DomainError if k < 2 or ell < 1.
std::vector<WeightedItem> bad_instance(std::size_t k, std::size_t ell);

// Pareto(alpha) weights with scale 1, keys "i0".."i{n-1}".
std::vector<WeightedItem> pareto_instance(std::size_t n, double alpha,
                                          RandomSource& rng);

// Weights uniform in [lo, hi), keys "i0".."i{n-1}".
std::vector<WeightedItem> uniform_instance(std::size_t n, double lo,
                                           double hi, RandomSource& rng);

// Items with the given weights, keys "i0".."i{n-1}".
std::vector<WeightedItem> items_from_weights(std::span<const double> weights);

std::vector<double> weights_of(std::span<const WeightedItem> items);

// Parses one "key<TAB>weight" line. Blank lines and '#' comments yield
// nullopt. Throws ParseError carrying `line_no` on anything else that is
// not a valid item.
std::optional<WeightedItem> parse_item_line(std::string_view line,
                                            std::size_t line_no);

// Reads a whole key/weight stream, assigning arrival indices in order.
std::vector<WeightedItem> read_items(std::istream& in);

}  // namespace varopt

#endif  // VAROPT_INSTANCES_HPP_
