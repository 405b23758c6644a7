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

#ifndef VAROPT_ESTIMATE_HPP_
#define VAROPT_ESTIMATE_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "varopt/types.hpp"

namespace varopt {

// Which keys belong to the queried subset. An explicit key set also knows
// the subset's size, which tightens confidence intervals.
class KeySelector {
 public:
  static KeySelector all();
  static KeySelector none();
  static KeySelector keys(std::vector<std::string> keys);
  static KeySelector prefix(std::string prefix);
  static KeySelector predicate(std::function<bool(std::string_view)> pred);

  bool matches(std::string_view key) const { return pred_(key); }
  // Subset size when the selector enumerates its keys.
  std::optional<std::size_t> population() const { return population_; }

 private:
  KeySelector(std::function<bool(std::string_view)> pred,
              std::optional<std::size_t> population)
      : pred_(std::move(pred)), population_(population) {}

  std::function<bool(std::string_view)> pred_;
  std::optional<std::size_t> population_;
};

// Sum of adjusted weights over the selected entries.
double subset_estimate(const Sample& sample, const KeySelector& selector);

struct ConfidenceInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double heavy_weight = 0.0;      // exact part: selected entries >= tau
  std::size_t light_sampled = 0;  // X_I, selected entries below tau
};

// Two-sided interval at level delta per side. Selected entries whose
// original weight is at least the threshold contribute exactly; the light
// part is tau times a count X_I with mean mu = (light weight) / tau, and mu
// is bracketed by inverting the Chernoff tail bound (bisection to 1e-9).
// When the selector's population is known, the number of light items in
// the subset is population - heavy count and the finite-m bound is used;
// otherwise the m -> infinity form.
//
// Throws DomainError unless 0 < delta < 1.
ConfidenceInterval confidence_interval(const Sample& sample,
                                       const KeySelector& selector,
                                       double delta);

}  // namespace varopt

#endif  // VAROPT_ESTIMATE_HPP_
