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

#include "varopt/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "varopt/errors.hpp"

namespace varopt {

void validate_weight(double weight) {
  if (!std::isfinite(weight) || !(weight > 0.0)) {
    throw DomainError("weight must be positive and finite, got " +
                      std::to_string(weight));
  }
}

double Sample::adjusted_total() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.adjusted_weight;
  return total;
}

double ipps_threshold(std::span<const double> weights, std::size_t k) {
  if (k == 0) throw DomainError("ipps_threshold: k must be positive");
  for (double w : weights) validate_weight(w);
  const std::size_t n = weights.size();
  if (k >= n) return 0.0;

  std::vector<double> desc(weights.begin(), weights.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());

  // suffix[h] = sum of desc[h..n), accumulated from the small end.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + desc[i];

  for (std::size_t h = 0; h < k; ++h) {
    const double tau = suffix[h] / static_cast<double>(k - h);
    if (desc[h] <= tau) return tau;
  }
  // Unreachable: at h = k-1 the remainder contains desc[k-1] itself.
  throw InternalError("ipps_threshold: no consistent heavy count");
}

double inclusion_probability(double weight, double tau) {
  validate_weight(weight);
  if (!(tau >= 0.0)) throw DomainError("inclusion_probability: tau < 0");
  if (tau == 0.0 || weight >= tau) return 1.0;
  return weight / tau;
}

DropResult select_drop(std::span<const SampleEntry> entries, double tau_new,
                       double r) {
  if (entries.empty()) throw DomainError("select_drop: no entries");
  if (!(tau_new > 0.0)) throw DomainError("select_drop: tau must be > 0");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("select_drop: r not in (0,1)");

  std::vector<double> q(entries.size());
  double q_total = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    q[i] = std::max(0.0, 1.0 - entries[i].adjusted_weight / tau_new);
    q_total += q[i];
  }
  if (std::abs(q_total - 1.0) > 1e-9) {
    throw InternalError("select_drop: drop probabilities sum to " +
                        std::to_string(q_total));
  }

  // Smallest d with q_1 + ... + q_d >= r. Rounding can leave the last
  // segment a hair short of 1; the last positive segment absorbs that.
  std::size_t dropped = entries.size();
  std::size_t last_positive = 0;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (q[i] <= 0.0) continue;
    last_positive = i;
    cumulative += q[i];
    if (cumulative >= r) {
      dropped = i;
      break;
    }
  }
  if (dropped == entries.size()) dropped = last_positive;

  DropResult result;
  result.dropped = dropped;
  result.survivors.reserve(entries.size() - 1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == dropped) continue;
    SampleEntry e = entries[i];
    if (e.adjusted_weight < tau_new) e.adjusted_weight = tau_new;
    result.survivors.push_back(std::move(e));
  }
  return result;
}

std::vector<std::size_t> canonical_drop_order(
    std::span<const double> adjusted,
    std::span<const std::uint64_t> arrival) {
  if (adjusted.size() != arrival.size()) {
    throw DomainError("canonical_drop_order: size mismatch");
  }
  std::vector<std::size_t> order(adjusted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (adjusted[a] != adjusted[b]) return adjusted[a] < adjusted[b];
    return arrival[a] < arrival[b];
  });
  return order;
}

}  // namespace varopt
