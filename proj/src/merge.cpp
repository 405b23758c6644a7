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

#include "varopt/merge.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "varopt/errors.hpp"
#include "varopt/reservoir.hpp"

namespace varopt {

Sample merge(std::span<const Sample> samples, std::size_t k,
             RandomSource& rng) {
  if (k == 0) throw DomainError("merge: k must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].capacity_k < k) {
      throw PreconditionError(
          "merge: input " + std::to_string(i) + " has capacity " +
          std::to_string(samples[i].capacity_k) + " < k = " +
          std::to_string(k));
    }
  }

  std::vector<const SampleEntry*> all;
  double total = 0.0;
  std::uint64_t items_seen = 0;
  for (const Sample& s : samples) {
    total += s.total_weight_seen;
    items_seen += s.items_seen;
    for (const SampleEntry& e : s.entries) all.push_back(&e);
  }
  std::sort(all.begin(), all.end(),
            [](const SampleEntry* a, const SampleEntry* b) {
              return a->key < b->key;
            });
  const auto dup = std::adjacent_find(
      all.begin(), all.end(), [](const SampleEntry* a, const SampleEntry* b) {
        return a->key == b->key;
      });
  if (dup != all.end()) {
    throw DomainError("merge: key '" + (*dup)->key +
                      "' appears in more than one sample");
  }

  if (samples.size() == 1 && samples[0].entries.size() <= k) {
    Sample out = samples[0];
    out.capacity_k = k;
    return out;
  }

  const auto reservoir = make_reservoir(k, Implementation::kTree);
  for (const SampleEntry* e : all) {
    reservoir->insert(e->key, e->adjusted_weight, rng);
  }
  Sample out = reservoir->sample();
  out.total_weight_seen = total;
  out.items_seen = items_seen;
  return out;
}

}  // namespace varopt
