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

#ifndef VAROPT_TYPES_HPP_
#define VAROPT_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace varopt {

// A stream element. Keys are opaque strings; numeric keys are rendered
// in decimal by the callers that have them.
struct WeightedItem {
  std::string key;
  double weight = 0.0;
  std::uint64_t arrival_index = 0;
};

// Throws DomainError unless `weight` is positive and finite.
void validate_weight(double weight);

// One record of a sample. `original_weight` is the weight the producing
// sampler was fed; `adjusted_weight` is its unbiased estimate.
struct SampleEntry {
  std::string key;
  double adjusted_weight = 0.0;
  double original_weight = 0.0;

  friend bool operator==(const SampleEntry&, const SampleEntry&) = default;
};

struct Sample {
  std::vector<SampleEntry> entries;
  std::size_t capacity_k = 0;
  double threshold = 0.0;
  double total_weight_seen = 0.0;
  std::uint64_t items_seen = 0;

  double adjusted_total() const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

}  // namespace varopt

#endif  // VAROPT_TYPES_HPP_
