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
#include "varopt/order_statistic_tree.hpp"

namespace varopt::internal {
namespace {

struct LargeKey {
  double weight;
  std::uint64_t arrival;
  std::uint32_t slot;
};

struct LargeLess {
  bool operator()(const LargeKey& a, const LargeKey& b) const {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.arrival < b.arrival;
  }
};

struct SmallKey {
  std::uint64_t arrival;
  std::uint32_t slot;
};

struct SmallLess {
  bool operator()(const SmallKey& a, const SmallKey& b) const {
    return a.arrival < b.arrival;
  }
};

// Large items live in a tree ordered by (weight, arrival) whose nodes carry
// subtree counts and weight sums; small items live in a tree ordered by
// arrival whose nodes carry counts (their weight is tau times the count).
//
// Drop order for a step: the new item if it ends up below the new
// threshold, then the small items by arrival, then the large items that
// fall below the new threshold by (weight, arrival). That is the canonical
// (adjusted weight, arrival) order with the new item's segment moved to
// the front, which lets the constant-time step share its uniform.
class TreeReservoir final : public Reservoir {
 public:
  TreeReservoir(std::size_t capacity, ReservoirOptions options)
      : Reservoir(capacity, options) {
    slots_.reserve(capacity + 1);
  }

  Implementation implementation() const override {
    return Implementation::kTree;
  }
  std::size_t small_count() const override { return small_.size(); }
  std::size_t large_count() const override { return large_.size(); }
  double large_weight_sum() const override { return large_.total_weight(); }
  double min_large() const override {
    return large_.empty() ? std::numeric_limits<double>::infinity()
                          : large_.front_weight();
  }

 protected:
  void store(const WeightedItem& item) override {
    const std::uint32_t slot = allocate(item);
    large_.insert({item.weight, item.arrival_index, slot}, item.weight);
  }

  std::string step(const WeightedItem& item, double r) override {
    const double tau_prev = threshold();
    const std::size_t n_small = small_.size();
    const double w = item.weight;
    const bool new_small = n_small > 0 && w <= tau_prev;

    const std::uint32_t new_slot = allocate(item);
    const LargeKey new_large{w, item.arrival_index, new_slot};
    if (!new_small) large_.insert(new_large, w);

    // Everything at or below the old threshold is certainly at or below the
    // new one; the search only has to decide how far into L it reaches.
    const std::size_t prefix_count = n_small + (new_small ? 1 : 0);
    const double prefix_sum =
        (new_small ? w : 0.0) + static_cast<double>(n_small) * tau_prev;

    // t = largest index with (sum of the t smallest) >= (t - 1) * w_(t).
    const auto first_above = large_.find_first(
        [&](const LargeKey&, double weight, std::size_t count, double sum) {
          return prefix_sum + sum <
                 static_cast<double>(prefix_count + count - 1) * weight;
        });
    std::size_t light_large;  // L items at or below the new threshold
    double light_sum;
    if (first_above) {
      light_large = first_above->rank;
      light_sum = prefix_sum + first_above->sum_before;
    } else {
      light_large = large_.size();
      light_sum = prefix_sum + large_.total_weight();
    }
    const std::size_t t = prefix_count + light_large;
    if (t < 2) throw InternalError("tree step: threshold index below 2");
    const double tau = light_sum / static_cast<double>(t - 1);

    const bool new_light =
        new_small || !first_above || LargeLess{}(new_large, *first_above->value);
    if (new_light && !new_small) {
      large_.erase(new_large);
      --light_large;
    }

    // Smallest d with d * tau - (sum of the first d adjusted weights)
    // >= r * tau, walking the drop order.
    const double r_tau = r * tau;
    std::size_t acc_count = 0;
    double acc_sum = 0.0;
    auto reached = [&](std::size_t count, double sum) {
      return static_cast<double>(count) * tau - sum >= r_tau;
    };

    enum class Where { kNone, kNew, kSmall, kLarge } where = Where::kNone;
    std::size_t drop_rank = 0;

    if (new_light) {
      acc_count = 1;
      acc_sum = w;
      if (reached(acc_count, acc_sum)) where = Where::kNew;
    }
    const bool small_segments = n_small > 0 && tau > tau_prev;
    if (where == Where::kNone && small_segments) {
      auto reached_small = [&](std::size_t c) {
        return reached(acc_count + c,
                       acc_sum + static_cast<double>(c) * tau_prev);
      };
      if (reached_small(n_small)) {
        std::size_t lo = 1, hi = n_small;
        while (lo < hi) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (reached_small(mid)) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
        where = Where::kSmall;
        drop_rank = lo - 1;
      }
    }
    if (where == Where::kNone && light_large > 0) {
      const std::size_t base_count = acc_count + n_small;
      const double base_sum =
          acc_sum + static_cast<double>(n_small) * tau_prev;
      const auto hit = large_.find_first(
          [&](const LargeKey&, double, std::size_t count, double sum) {
            return count > light_large ||
                   reached(base_count + count, base_sum + sum);
          });
      if (hit && hit->rank < light_large) {
        where = Where::kLarge;
        drop_rank = hit->rank;
      }
    }
    if (where == Where::kNone) {
      // Rounding left r past the last segment: drop the last light item.
      if (light_large > 0) {
        where = Where::kLarge;
        drop_rank = light_large - 1;
      } else if (small_segments) {
        where = Where::kSmall;
        drop_rank = n_small - 1;
      } else if (new_light) {
        where = Where::kNew;
      } else {
        throw InternalError("tree step: no droppable item");
      }
    }

    std::string dropped;
    switch (where) {
      case Where::kNew:
        dropped = release(new_slot);
        break;
      case Where::kSmall: {
        const SmallKey victim = small_.select(drop_rank);
        small_.erase(victim);
        dropped = release(victim.slot);
        break;
      }
      case Where::kLarge: {
        const LargeKey victim = large_.select(drop_rank);
        large_.erase(victim);
        dropped = release(victim.slot);
        --light_large;
        break;
      }
      case Where::kNone:
        break;
    }
    if (new_light && where != Where::kNew) {
      small_.insert({item.arrival_index, new_slot}, 0.0);
    }
    for (std::size_t i = 0; i < light_large; ++i) {
      const LargeKey moved = large_.pop_front();
      small_.insert({moved.arrival, moved.slot}, 0.0);
    }
    set_threshold(tau);
    return dropped;
  }

  void collect(std::vector<SampleEntry>& out) const override {
    large_.for_each([&](const LargeKey& v, double) {
      const WeightedItem& item = slots_[v.slot];
      out.push_back({item.key, item.weight, item.weight});
    });
    const double tau = threshold();
    small_.for_each([&](const SmallKey& v, double) {
      const WeightedItem& item = slots_[v.slot];
      out.push_back({item.key, tau, item.weight});
    });
  }

 private:
  std::uint32_t allocate(const WeightedItem& item) {
    std::uint32_t slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
      slots_[slot] = item;
    } else {
      slot = static_cast<std::uint32_t>(slots_.size());
      slots_.push_back(item);
    }
    return slot;
  }

  std::string release(std::uint32_t slot) {
    free_slots_.push_back(slot);
    return std::move(slots_[slot].key);
  }

  std::vector<WeightedItem> slots_;
  std::vector<std::uint32_t> free_slots_;
  OrderStatisticTree<LargeKey, LargeLess> large_;
  OrderStatisticTree<SmallKey, SmallLess> small_;
};

}  // namespace

std::unique_ptr<Reservoir> make_tree_reservoir(std::size_t capacity,
                                               ReservoirOptions options) {
  return std::make_unique<TreeReservoir>(capacity, options);
}

}  // namespace varopt::internal
