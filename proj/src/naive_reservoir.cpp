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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "reservoir_internal.hpp"
#include "varopt/errors.hpp"
#include "varopt/threshold.hpp"

namespace varopt::internal {
namespace {

// Reference implementation: every step sorts all k+1 candidates by
// (adjusted weight, arrival), recomputes the threshold index by scanning
// every prefix, and hands the drop to select_drop with the new item's
// segment first.
class NaiveReservoir final : public Reservoir {
 public:
  NaiveReservoir(std::size_t capacity, ReservoirOptions options)
      : Reservoir(capacity, options) {}

  Implementation implementation() const override {
    return Implementation::kNaive;
  }
  std::size_t small_count() const override {
    return static_cast<std::size_t>(
        std::count_if(held_.begin(), held_.end(), [&](const Held& h) {
          return is_small(h);
        }));
  }
  std::size_t large_count() const override {
    return held_.size() - small_count();
  }
  double large_weight_sum() const override {
    double sum = 0.0;
    for (const Held& h : held_) {
      if (!is_small(h)) sum += h.adjusted;
    }
    return sum;
  }
  double min_large() const override {
    double m = std::numeric_limits<double>::infinity();
    for (const Held& h : held_) {
      if (!is_small(h)) m = std::min(m, h.adjusted);
    }
    return m;
  }

 protected:
  void store(const WeightedItem& item) override {
    held_.push_back({item, item.weight});
  }

  std::string step(const WeightedItem& item, double r) override {
    std::vector<Held> all = held_;
    all.push_back({item, item.weight});
    const std::size_t n = all.size();

    std::vector<double> adjusted(n);
    std::vector<std::uint64_t> arrival(n);
    for (std::size_t i = 0; i < n; ++i) {
      adjusted[i] = all[i].adjusted;
      arrival[i] = all[i].item.arrival_index;
    }
    const std::vector<std::size_t> order =
        canonical_drop_order(adjusted, arrival);

    // Largest t with (sum of the t smallest) >= (t - 1) * w_(t).
    std::size_t t = 0;
    double prefix = 0.0;
    double prefix_at_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      prefix += adjusted[order[i]];
      if (prefix >= static_cast<double>(i) * adjusted[order[i]]) {
        t = i + 1;
        prefix_at_t = prefix;
      }
    }
    if (t < 2) throw InternalError("naive step: threshold index below 2");
    const double tau = prefix_at_t / static_cast<double>(t - 1);

    // Drop order: new item first if light, then the canonical order.
    std::vector<char> light(n, 0);
    for (std::size_t i = 0; i < t; ++i) light[order[i]] = 1;
    const std::size_t new_index = n - 1;
    std::vector<std::size_t> drop_order;
    drop_order.reserve(n);
    if (light[new_index]) drop_order.push_back(new_index);
    for (std::size_t i : order) {
      if (i != new_index || !light[new_index]) drop_order.push_back(i);
    }

    std::vector<SampleEntry> entries;
    entries.reserve(n);
    for (std::size_t i : drop_order) {
      const Held& h = all[i];
      // Heavy items get q = 0 even if rounding put them a hair under tau.
      entries.push_back({h.item.key,
                         light[i] ? h.adjusted : std::max(h.adjusted, tau),
                         h.item.weight});
    }
    const DropResult result = select_drop(entries, tau, r);

    std::string dropped = entries[result.dropped].key;
    held_.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == result.dropped) continue;
      Held h = all[drop_order[j]];
      if (light[drop_order[j]]) h.adjusted = tau;
      held_.push_back(std::move(h));
    }
    set_threshold(tau);
    return dropped;
  }

  void collect(std::vector<SampleEntry>& out) const override {
    for (const Held& h : held_) {
      out.push_back({h.item.key, h.adjusted, h.item.weight});
    }
  }

 private:
  struct Held {
    WeightedItem item;
    double adjusted;
  };

  bool is_small(const Held& h) const { return h.adjusted <= threshold(); }

  std::vector<Held> held_;
};

}  // namespace

std::unique_ptr<Reservoir> make_naive_reservoir(std::size_t capacity,
                                                ReservoirOptions options) {
  return std::make_unique<NaiveReservoir>(capacity, options);
}

}  // namespace varopt::internal
