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

#include "varopt/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reservoir_internal.hpp"
#include "varopt/errors.hpp"

namespace varopt {

std::string_view to_string(Implementation impl) {
  switch (impl) {
    case Implementation::kTree:
      return "tree";
    case Implementation::kAmortized:
      return "amortized";
    case Implementation::kNaive:
      return "naive";
  }
  return "unknown";
}

std::optional<Implementation> parse_implementation(std::string_view name) {
  if (name == "tree") return Implementation::kTree;
  if (name == "amortized") return Implementation::kAmortized;
  if (name == "naive" || name == "naive_oracle") return Implementation::kNaive;
  return std::nullopt;
}

SimpleCaseCheck simple_case_check(double weight, double tau_prev,
                                  std::size_t small_count, double min_large) {
  SimpleCaseCheck check;
  if (small_count == 0) return check;
  const double n = static_cast<double>(small_count);
  check.tau = (weight + n * tau_prev) / n;
  if (weight >= check.tau || check.tau >= min_large) return check;
  check.eligible = true;
  check.drop_new_probability = 1.0 - weight / check.tau;
  return check;
}

Reservoir::Reservoir(std::size_t capacity, ReservoirOptions options)
    : capacity_(capacity), options_(options) {
  if (capacity == 0) throw DomainError("reservoir capacity must be >= 1");
  keys_.reserve(capacity + 1);
}

void Reservoir::insert(std::string key, double weight, RandomSource& rng) {
  WeightedItem item{std::move(key), weight,
                    last_arrival_ ? *last_arrival_ + 1 : 0};
  admit(item, rng);
}

void Reservoir::insert(const WeightedItem& item, RandomSource& rng) {
  admit(item, rng);
}

void Reservoir::check_new(const WeightedItem& item) const {
  validate_weight(item.weight);
  if (last_arrival_ && item.arrival_index <= *last_arrival_) {
    throw DomainError("arrival index " + std::to_string(item.arrival_index) +
                      " does not increase");
  }
  if (keys_.contains(item.key)) {
    throw DomainError("duplicate key '" + item.key + "'");
  }
}

void Reservoir::admit(const WeightedItem& item, RandomSource& rng) {
  check_new(item);
  if (items_seen_ < capacity_) {
    store(item);
    keys_.insert(item.key);
    last_arrival_ = item.arrival_index;
    ++items_seen_;
    total_weight_ += item.weight;
    return;
  }
  std::optional<double> carried;
  if (options_.fast_path && implementation() != Implementation::kNaive) {
    SimpleResult simple = simple_step(item, rng);
    if (simple.handled) return;
    carried = simple.carried_r;
  }
  full_step(item, carried ? *carried : rng.uniform());
}

SimpleResult Reservoir::try_simple_insert(const WeightedItem& item,
                                          RandomSource& rng) {
  check_new(item);
  if (items_seen_ < capacity_) {
    throw PreconditionError("try_simple_insert on a reservoir that is not full");
  }
  return simple_step(item, rng);
}

SimpleResult Reservoir::simple_step(const WeightedItem& item,
                                    RandomSource& rng) {
  const SimpleCaseCheck check =
      simple_case_check(item.weight, tau_, small_count(), min_large());
  if (!check.eligible) return {};
  const double r = rng.uniform();
  // Drop-new segment [0, 1 - w/tau) comes first in the drop order.
  if (r * check.tau <= check.tau - item.weight) {
    tau_ = check.tau;
    last_arrival_ = item.arrival_index;
    ++items_seen_;
    total_weight_ += item.weight;
    ++counters_.simple_steps;
    return {true, std::nullopt};
  }
  return {false, r};
}

void Reservoir::insert_with_uniform(const WeightedItem& item, double r) {
  check_new(item);
  if (items_seen_ < capacity_) {
    throw PreconditionError("insert_with_uniform on a reservoir that is not full");
  }
  if (!(r > 0.0 && r < 1.0)) throw DomainError("uniform must lie in (0,1)");
  full_step(item, r);
}

void Reservoir::full_step(const WeightedItem& item, double r) {
  keys_.insert(item.key);
  const std::string dropped = step(item, r);
  keys_.erase(dropped);
  last_arrival_ = item.arrival_index;
  ++items_seen_;
  total_weight_ += item.weight;
  ++counters_.full_steps;
}

Sample Reservoir::sample() const {
  Sample s;
  s.capacity_k = capacity_;
  s.threshold = tau_;
  s.total_weight_seen = total_weight_;
  s.items_seen = items_seen_;
  s.entries.reserve(size());
  collect(s.entries);
  std::sort(s.entries.begin(), s.entries.end(),
            [](const SampleEntry& a, const SampleEntry& b) {
              return a.key < b.key;
            });
  return s;
}

void Reservoir::check_invariants() const {
  auto fail = [](const std::string& what) {
    throw InternalError("reservoir invariant: " + what);
  };
  const std::uint64_t expected =
      std::min<std::uint64_t>(capacity_, items_seen_);
  if (size() != expected) fail("size " + std::to_string(size()));
  if (keys_.size() != expected) fail("key index out of sync");
  if (items_seen_ > capacity_) {
    if (small_count() == 0) fail("no item at the threshold");
    if (!(min_large() > tau_)) fail("large weight not above threshold");
  } else if (tau_ != 0.0) {
    fail("threshold set before the reservoir filled");
  }
  const double held = tau_ * static_cast<double>(small_count()) +
                      large_weight_sum();
  if (std::abs(held - total_weight_) >
      1e-9 * std::max(1.0, std::abs(total_weight_))) {
    fail("held weight " + std::to_string(held) + " != seen " +
         std::to_string(total_weight_));
  }
}

std::unique_ptr<Reservoir> make_reservoir(std::size_t capacity,
                                          Implementation impl,
                                          ReservoirOptions options) {
  if (capacity == 0) throw DomainError("reservoir capacity must be >= 1");
  switch (impl) {
    case Implementation::kTree:
      return internal::make_tree_reservoir(capacity, options);
    case Implementation::kAmortized:
      return internal::make_amortized_reservoir(capacity, options);
    case Implementation::kNaive:
      return internal::make_naive_reservoir(capacity, options);
  }
  throw DomainError("unknown reservoir implementation");
}

}  // namespace varopt
