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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "reservoir_internal.hpp"
#include "varopt/errors.hpp"

namespace varopt::internal {
namespace {

struct HeapEntry {
  double weight;
  std::uint64_t arrival;
  std::uint32_t slot;
};

// std heap algorithms build max-heaps; invert for the lightest on top.
struct HeavierFirst {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.arrival > b.arrival;
  }
};

// Priority queue over the large items and a flat array of small ones.
// A full step builds X (items about to fall to the threshold), pops the
// lightest large item into X while W >= (|T| + |X| - 1) * min_L, then
// drops one member of X or a uniform member of T.
class AmortizedReservoir final : public Reservoir {
 public:
  AmortizedReservoir(std::size_t capacity, ReservoirOptions options)
      : Reservoir(capacity, options) {
    slots_.reserve(capacity + 1);
    large_.reserve(capacity + 1);
    small_.reserve(capacity + 1);
  }

  Implementation implementation() const override {
    return Implementation::kAmortized;
  }
  std::size_t small_count() const override { return small_.size(); }
  std::size_t large_count() const override { return large_.size(); }
  double large_weight_sum() const override {
    double sum = 0.0;
    for (const auto& e : large_) sum += e.weight;
    return sum;
  }
  double min_large() const override {
    return large_.empty() ? std::numeric_limits<double>::infinity()
                          : large_.front().weight;
  }

 protected:
  void store(const WeightedItem& item) override {
    push_large({item.weight, item.arrival_index, allocate(item)});
  }

  std::string step(const WeightedItem& item, double r) override {
    const double tau_prev = threshold();
    const std::size_t n_small = small_.size();

    moving_.clear();
    double total = tau_prev * static_cast<double>(n_small);
    const std::uint32_t new_slot = allocate(item);
    if (item.weight > tau_prev) {
      push_large({item.weight, item.arrival_index, new_slot});
    } else {
      moving_.push_back({item.weight, item.arrival_index, new_slot});
      total += item.weight;
    }
    auto denominator = [&] {
      return static_cast<double>(n_small + moving_.size()) - 1.0;
    };
    while (!large_.empty() && total >= denominator() * large_.front().weight) {
      moving_.push_back(pop_large());
      total += moving_.back().weight;
    }
    if (!(denominator() >= 1.0)) {
      throw InternalError("amortized step: fewer than two light items");
    }
    const double tau = total / denominator();

    // Scan X, then spend what is left of r on a uniform pick from T.
    double rest = r;
    std::size_t d = 0;
    while (d < moving_.size() && rest >= 0.0) {
      rest -= 1.0 - moving_[d].weight / tau;
      ++d;
    }
    std::string dropped;
    const double small_q = 1.0 - tau_prev / tau;
    if (rest < 0.0) {
      dropped = remove_moving(d - 1);
    } else if (n_small > 0 && small_q > 0.0) {
      auto i = static_cast<std::size_t>(rest / small_q);
      i = std::min(i, n_small - 1);
      dropped = release(small_[i]);
      small_[i] = small_.back();
      small_.pop_back();
    } else {
      // Rounding left r past the last segment of X.
      std::size_t last = moving_.size();
      for (std::size_t i = 0; i < moving_.size(); ++i) {
        if (moving_[i].weight < tau) last = i;
      }
      if (last == moving_.size()) {
        throw InternalError("amortized step: no droppable item");
      }
      dropped = remove_moving(last);
    }
    for (const HeapEntry& e : moving_) small_.push_back(e.slot);
    set_threshold(tau);
    return dropped;
  }

  void collect(std::vector<SampleEntry>& out) const override {
    for (const HeapEntry& e : large_) {
      const WeightedItem& item = slots_[e.slot];
      out.push_back({item.key, item.weight, item.weight});
    }
    const double tau = threshold();
    for (std::uint32_t slot : small_) {
      const WeightedItem& item = slots_[slot];
      out.push_back({item.key, tau, item.weight});
    }
  }

 private:
  void push_large(const HeapEntry& e) {
    large_.push_back(e);
    std::push_heap(large_.begin(), large_.end(), HeavierFirst{});
  }

  HeapEntry pop_large() {
    std::pop_heap(large_.begin(), large_.end(), HeavierFirst{});
    HeapEntry e = large_.back();
    large_.pop_back();
    return e;
  }

  std::string remove_moving(std::size_t i) {
    std::string key = release(moving_[i].slot);
    moving_[i] = moving_.back();
    moving_.pop_back();
    return key;
  }

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
  std::vector<HeapEntry> large_;     // min-heap by (weight, arrival)
  std::vector<std::uint32_t> small_;  // slots at the threshold
  std::vector<HeapEntry> moving_;    // X, reused across steps
};

}  // namespace

std::unique_ptr<Reservoir> make_amortized_reservoir(std::size_t capacity,
                                                    ReservoirOptions options) {
  return std::make_unique<AmortizedReservoir>(capacity, options);
}

}  // namespace varopt::internal
