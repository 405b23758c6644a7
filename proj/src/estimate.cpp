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

#include "varopt/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varopt/chernoff.hpp"
#include "varopt/errors.hpp"

namespace varopt {

KeySelector KeySelector::all() {
  return KeySelector([](std::string_view) { return true; }, std::nullopt);
}

KeySelector KeySelector::none() {
  return KeySelector([](std::string_view) { return false; }, 0);
}

KeySelector KeySelector::keys(std::vector<std::string> keys) {
  auto set = std::make_shared<const std::unordered_set<std::string>>(
      std::make_move_iterator(keys.begin()),
      std::make_move_iterator(keys.end()));
  const std::size_t n = set->size();
  return KeySelector(
      [set](std::string_view key) { return set->contains(std::string(key)); },
      n);
}

KeySelector KeySelector::prefix(std::string prefix) {
  return KeySelector(
      [p = std::move(prefix)](std::string_view key) {
        return key.starts_with(p);
      },
      std::nullopt);
}

KeySelector KeySelector::predicate(
    std::function<bool(std::string_view)> pred) {
  return KeySelector(std::move(pred), std::nullopt);
}

double subset_estimate(const Sample& sample, const KeySelector& selector) {
  double sum = 0.0;
  for (const SampleEntry& e : sample.entries) {
    if (selector.matches(e.key)) sum += e.adjusted_weight;
  }
  return sum;
}

namespace {

constexpr double kMuTolerance = 1e-9;

// Root of a monotone f on [lo, hi], given f(lo) and f(hi) of opposite sign.
template <typename F>
double bisect(F f, double lo, double hi) {
  const bool rising = f(hi) > f(lo);
  // The iteration cap covers brackets too wide for 1e-9 to be
  // representable.
  for (int i = 0; i < 200 && hi - lo > kMuTolerance; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if ((f(mid) < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace

ConfidenceInterval confidence_interval(const Sample& sample,
                                       const KeySelector& selector,
                                       double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("confidence_interval: delta must lie in (0,1)");
  }
  const double tau = sample.threshold;
  ConfidenceInterval ci;
  std::size_t heavy_count = 0;
  for (const SampleEntry& e : sample.entries) {
    if (!selector.matches(e.key)) continue;
    ci.estimate += e.adjusted_weight;
    if (tau == 0.0 || e.original_weight >= tau) {
      ci.heavy_weight += e.adjusted_weight;
      ++heavy_count;
    } else {
      ++ci.light_sampled;
    }
  }
  ci.lower = ci.upper = ci.estimate;
  if (tau == 0.0) return ci;

  double m = std::numeric_limits<double>::infinity();
  if (auto pop = selector.population()) {
    m = static_cast<double>(*pop >= heavy_count ? *pop - heavy_count : 0);
    m = std::max(m, static_cast<double>(ci.light_sampled));
  }
  if (m == 0.0) return ci;

  const double x = static_cast<double>(ci.light_sampled);
  const double log_delta = std::log(delta);
  auto excess = [&](double mu) {
    return chernoff_log_bound(m, mu, x) - log_delta;
  };

  // Smallest mu under which seeing >= x light items is still plausible.
  double mu_lo = 0.0;
  if (x > 0.0) {
    const double tiny = std::min(x, 1.0) * 1e-300;
    mu_lo = excess(tiny) >= 0.0 ? 0.0 : bisect(excess, tiny, x);
  }
  // Largest mu under which seeing <= x light items is still plausible.
  double mu_hi;
  if (x >= m) {
    mu_hi = m;
  } else {
    double hi;
    if (std::isinf(m)) {
      hi = std::max(1.0, 2.0 * x);
      while (excess(hi) >= 0.0) hi *= 2.0;
    } else {
      hi = std::nextafter(m, 0.0);
    }
    const double lo = std::max(x, std::numeric_limits<double>::min());
    mu_hi = excess(hi) >= 0.0 ? hi : bisect(excess, lo, hi);
  }
  ci.lower = ci.heavy_weight + tau * mu_lo;
  ci.upper = ci.heavy_weight + tau * mu_hi;
  return ci;
}

}  // namespace varopt
