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

#ifndef VAROPT_RESERVOIR_HPP_
#define VAROPT_RESERVOIR_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "varopt/random.hpp"
#include "varopt/types.hpp"

namespace varopt {

enum class Implementation {
  kTree,       // balanced search trees, O(log k) per full step
  kAmortized,  // min-heap over large items plus a flat array of small ones
  kNaive,      // full sort of the k+1 candidates on every step
};

std::string_view to_string(Implementation impl);
// Accepts "tree", "amortized" and "naive".
std::optional<Implementation> parse_implementation(std::string_view name);

struct ReservoirOptions {
  // Try the constant-time step (new item dropped, no large weight crossed)
  // before the full step. Ignored by the naive implementation.
  bool fast_path = true;
};

struct ReservoirCounters {
  std::uint64_t simple_steps = 0;  // handled by the constant-time step
  std::uint64_t full_steps = 0;
};

// Tentative outcome of the constant-time step for a new item of `weight`
// arriving at a full reservoir with `small_count` items at `tau_prev` and
// smallest large weight `min_large` (+inf when there is none).
struct SimpleCaseCheck {
  bool eligible = false;
  double tau = 0.0;                   // tentative new threshold
  double drop_new_probability = 0.0;  // 1 - weight / tau when eligible
};
SimpleCaseCheck simple_case_check(double weight, double tau_prev,
                                  std::size_t small_count, double min_large);

struct SimpleResult {
  bool handled = false;
  // Set when a uniform was consumed but the step must fall back; the full
  // step has to reuse it with the new item's segment first.
  std::optional<double> carried_r;
};

// A fixed-capacity VarOpt_k reservoir. Items are kept in two groups: the
// large ones (weight above the threshold tau, estimate = weight) and the
// small ones (estimate = tau). Every step after the first k items consumes
// exactly one uniform from the RandomSource; the first k consume none.
class Reservoir {
 public:
  virtual ~Reservoir() = default;

  Reservoir(const Reservoir&) = delete;
  Reservoir& operator=(const Reservoir&) = delete;

  virtual Implementation implementation() const = 0;

  std::size_t capacity() const { return capacity_; }
  std::uint64_t items_seen() const { return items_seen_; }
  double total_weight_seen() const { return total_weight_; }
  double threshold() const { return tau_; }
  std::size_t size() const { return small_count() + large_count(); }
  const ReservoirCounters& counters() const { return counters_; }

  virtual std::size_t small_count() const = 0;
  virtual std::size_t large_count() const = 0;
  virtual double large_weight_sum() const = 0;
  // +inf when there are no large items.
  virtual double min_large() const = 0;

  // Assigns the next arrival index.
  void insert(std::string key, double weight, RandomSource& rng);
  // Uses item.arrival_index, which must exceed every earlier one.
  void insert(const WeightedItem& item, RandomSource& rng);

  // Constant-time attempt for a full reservoir. When `handled`, the item is
  // fully processed (dropped, tau raised). Otherwise nothing changed and the
  // caller finishes with insert_with_uniform, passing `carried_r` if set.
  SimpleResult try_simple_insert(const WeightedItem& item, RandomSource& rng);

  // Full step for a full reservoir, driven by the given uniform.
  void insert_with_uniform(const WeightedItem& item, double r);

  Sample sample() const;

  // Throws InternalError on any violated state invariant.
  void check_invariants() const;

 protected:
  Reservoir(std::size_t capacity, ReservoirOptions options);

  // Stores an item verbatim while fewer than k items have been seen.
  virtual void store(const WeightedItem& item) = 0;
  // One VarOpt_{k,k+1} step over the k stored items plus `item`; sets the
  // new threshold and returns the key that was dropped.
  virtual std::string step(const WeightedItem& item, double r) = 0;
  virtual void collect(std::vector<SampleEntry>& out) const = 0;

  void set_threshold(double tau) { tau_ = tau; }
  const ReservoirOptions& options() const { return options_; }

 private:
  void admit(const WeightedItem& item, RandomSource& rng);
  SimpleResult simple_step(const WeightedItem& item, RandomSource& rng);
  void full_step(const WeightedItem& item, double r);
  void check_new(const WeightedItem& item) const;

  std::size_t capacity_;
  ReservoirOptions options_;
  std::uint64_t items_seen_ = 0;
  std::optional<std::uint64_t> last_arrival_;
  double total_weight_ = 0.0;
  double tau_ = 0.0;
  ReservoirCounters counters_;
  std::unordered_set<std::string> keys_;
};

// Throws DomainError when capacity is 0.
std::unique_ptr<Reservoir> make_reservoir(std::size_t capacity,
                                          Implementation impl,
                                          ReservoirOptions options = {});

}  // namespace varopt

#endif  // VAROPT_RESERVOIR_HPP_
