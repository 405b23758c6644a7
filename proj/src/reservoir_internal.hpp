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

#ifndef VAROPT_SRC_RESERVOIR_INTERNAL_HPP_
#define VAROPT_SRC_RESERVOIR_INTERNAL_HPP_

#include <memory>

#include "varopt/reservoir.hpp"

namespace varopt::internal {

std::unique_ptr<Reservoir> make_tree_reservoir(std::size_t capacity,
                                               ReservoirOptions options);
std::unique_ptr<Reservoir> make_amortized_reservoir(std::size_t capacity,
                                                    ReservoirOptions options);
std::unique_ptr<Reservoir> make_naive_reservoir(std::size_t capacity,
                                                ReservoirOptions options);

}  // namespace varopt::internal

#endif  // VAROPT_SRC_RESERVOIR_INTERNAL_HPP_
