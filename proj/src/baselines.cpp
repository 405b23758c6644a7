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

#include "varopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varopt/errors.hpp"
#include "varopt/threshold.hpp"

namespace varopt {
namespace {

Sample empty_sample(std::span<const WeightedItem> items, std::size_t k) {
  if (k == 0) throw DomainError("sample size k must be positive");
  Sample s;
  s.capacity_k = k;
  s.items_seen = items.size();
  for (const WeightedItem& item : items) {
    validate_weight(item.weight);
    s.total_weight_seen += item.weight;
  }
  return s;
}

Sample everything(std::span<const WeightedItem> items, std::size_t k) {
  Sample s = empty_sample(items, k);
  for (const WeightedItem& item : items) {
    s.entries.push_back({item.key, item.weight, item.weight});
  }
  return s;
}

}  // namespace

Sample uniform_sample(std::span<const WeightedItem> items, std::size_t k,
                      RandomSource& rng) {
  const std::size_t n = items.size();
  if (k >= n) return everything(items, k);
  Sample s = empty_sample(items, k);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const double scale = static_cast<double>(n) / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    const WeightedItem& item = items[idx[i]];
    s.entries.push_back({item.key, item.weight * scale, item.weight});
  }
  return s;
}

Sample ppswr_sample(std::span<const WeightedItem> items, std::size_t k,
                    RandomSource& rng) {
  Sample s = empty_sample(items, k);
  const std::size_t n = items.size();
  if (n == 0) return s;
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) cumulative[i] = acc += items[i].weight;
  const double total = acc;

  std::vector<char> drawn(n, 0);
  for (std::size_t d = 0; d < k; ++d) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    drawn[static_cast<std::size_t>(it - cumulative.begin())] = 1;
  }
  const double kk = static_cast<double>(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (!drawn[i]) continue;
    const double share = items[i].weight / total;
    const double p = share >= 1.0 ? 1.0 : -std::expm1(kk * std::log1p(-share));
    s.entries.push_back({items[i].key, items[i].weight / p, items[i].weight});
  }
  return s;
}

Sample poisson_ipps_sample(std::span<const WeightedItem> items,
                           std::size_t k, RandomSource& rng) {
  if (k >= items.size()) return everything(items, k);
  Sample s = empty_sample(items, k);
  const std::vector<double> weights = [&] {
    std::vector<double> w;
    w.reserve(items.size());
    for (const auto& item : items) w.push_back(item.weight);
    return w;
  }();
  const double tau = ipps_threshold(weights, k);
  s.threshold = tau;
  for (const WeightedItem& item : items) {
    if (item.weight >= tau) {
      s.entries.push_back({item.key, item.weight, item.weight});
    } else if (rng.uniform() < item.weight / tau) {
      s.entries.push_back({item.key, tau, item.weight});
    }
  }
  return s;
}

Sample priority_sample(std::span<const WeightedItem> items, std::size_t k,
                       RandomSource& rng) {
  const std::size_t n = items.size();
  if (k >= n) return everything(items, k);
  Sample s = empty_sample(items, k);
  std::vector<std::pair<double, std::size_t>> prio(n);
  for (std::size_t i = 0; i < n; ++i) {
    prio[i] = {items[i].weight / rng.uniform(), i};
  }
  std::nth_element(prio.begin(), prio.begin() + static_cast<std::ptrdiff_t>(k),
                   prio.end(), std::greater<>());
  const double tau = prio[k].first;
  s.threshold = tau;
  for (std::size_t j = 0; j < k; ++j) {
    const WeightedItem& item = items[prio[j].second];
    s.entries.push_back({item.key, std::max(item.weight, tau), item.weight});
  }
  return s;
}

std::vector<std::string> ppswor_order(std::span<const WeightedItem> items,
                                      std::size_t count, RandomSource& rng) {
  const std::size_t n = items.size();
  std::vector<std::pair<double, std::size_t>> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    validate_weight(items[i].weight);
    rank[i] = {rng.exponential() / items[i].weight, i};
  }
  count = std::min(count, n);
  std::partial_sort(rank.begin(),
                    rank.begin() + static_cast<std::ptrdiff_t>(count),
                    rank.end());
  std::vector<std::string> keys;
  keys.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    keys.push_back(items[rank[i].second].key);
  }
  return keys;
}

Sample varopt_sample(std::span<const WeightedItem> items, std::size_t k,
                     RandomSource& rng, Implementation impl,
                     ReservoirOptions options) {
  const auto reservoir = make_reservoir(k, impl, options);
  for (const WeightedItem& item : items) {
    reservoir->insert(item.key, item.weight, rng);
  }
  return reservoir->sample();
}

std::vector<std::string> scheme_names() {
  return {"varopt",  "varopt_amortized", "varopt_naive", "uniform",
          "ppswr",   "poisson",          "priority"};
}

std::optional<Scheme> scheme_by_name(std::string_view name) {
  auto varopt_with = [](Implementation impl) -> Scheme {
    return [impl](std::span<const WeightedItem> items, std::size_t k,
                  RandomSource& rng) {
      return varopt_sample(items, k, rng, impl);
    };
  };
  if (name == "varopt") return varopt_with(Implementation::kTree);
  if (name == "varopt_amortized") {
    return varopt_with(Implementation::kAmortized);
  }
  if (name == "varopt_naive") return varopt_with(Implementation::kNaive);
  if (name == "uniform") return Scheme(uniform_sample);
  if (name == "ppswr") return Scheme(ppswr_sample);
  if (name == "poisson") return Scheme(poisson_ipps_sample);
  if (name == "priority") return Scheme(priority_sample);
  return std::nullopt;
}

}  // namespace varopt
