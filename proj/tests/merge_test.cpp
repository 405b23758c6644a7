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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "varopt/baselines.hpp"
#include "varopt/errors.hpp"
#include "varopt/instances.hpp"
#include "varopt/threshold.hpp"

namespace varopt {
namespace {

Sample singleton(const std::string& key, double w, std::size_t k) {
  Sample s;
  s.capacity_k = k;
  s.items_seen = 1;
  s.total_weight_seen = w;
  s.entries.push_back({key, w, w});
  return s;
}

TEST(Merge, TwoSingletons) {
  const std::vector<Sample> in = {singleton("a", 2.0, 1),
                                  singleton("b", 6.0, 1)};
  constexpr int kTrials = 100000;
  int a_kept = 0;
  RandomSource rng(5);
  for (int t = 0; t < kTrials; ++t) {
    const Sample m = merge(in, 1, rng);
    ASSERT_EQ(m.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(m.threshold, 8.0);
    EXPECT_DOUBLE_EQ(m.entries[0].adjusted_weight, 8.0);
    EXPECT_EQ(m.items_seen, 2u);
    EXPECT_DOUBLE_EQ(m.total_weight_seen, 8.0);
    a_kept += m.entries[0].key == "a";
  }
  EXPECT_NEAR(static_cast<double>(a_kept) / kTrials, 0.25,
              4 * testing::binomial_se(0.25, kTrials));
}

TEST(Merge, SmallUnionIsReturnedUnchanged) {
  const std::vector<Sample> in = {singleton("a", 2.0, 3),
                                  singleton("b", 6.0, 3)};
  RandomSource rng(1);
  const Sample m = merge(in, 3, rng);
  EXPECT_EQ(rng.draws(), 0u);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0], (SampleEntry{"a", 2.0, 2.0}));
  EXPECT_EQ(m.entries[1], (SampleEntry{"b", 6.0, 6.0}));
  EXPECT_EQ(m.threshold, 0.0);
}

TEST(Merge, SingleInputAtSameCapacityIsIdentity) {
  RandomSource rng(3);
  const auto items = pareto_instance(40, 1.0, rng);
  const Sample s = varopt_sample(items, 6, rng);
  const Sample m = merge(std::span<const Sample>(&s, 1), 6, rng);
  EXPECT_EQ(m.entries, s.entries);
  EXPECT_EQ(m.threshold, s.threshold);
  EXPECT_EQ(m.items_seen, s.items_seen);
}

TEST(Merge, Errors) {
  RandomSource rng(1);
  const std::vector<Sample> small = {singleton("a", 1.0, 1),
                                     singleton("b", 1.0, 2)};
  EXPECT_THROW(merge(small, 2, rng), PreconditionError);
  const std::vector<Sample> dup = {singleton("a", 1.0, 2),
                                   singleton("a", 3.0, 2)};
  EXPECT_THROW(merge(dup, 2, rng), DomainError);
  EXPECT_THROW(merge(dup, 0, rng), DomainError);
}

std::vector<WeightedItem> thirty_items() {
  RandomSource gen(42);
  return pareto_instance(30, 1.2, gen);
}

std::vector<Sample> split_and_sample(const std::vector<WeightedItem>& items,
                                     RandomSource& rng) {
  std::vector<Sample> parts;
  for (std::size_t p = 0; p < 3; ++p) {
    std::vector<WeightedItem> part(items.begin() + 10 * p,
                                   items.begin() + 10 * (p + 1));
    parts.push_back(varopt_sample(part, 5 + p, rng));
  }
  return parts;
}

TEST(Merge, ExactTotalAndInvariantsEveryRealization) {
  const auto items = thirty_items();
  double total = 0.0;
  for (const auto& it : items) total += it.weight;
  RandomSource rng(8);
  for (int t = 0; t < 2000; ++t) {
    const auto parts = split_and_sample(items, rng);
    const Sample m = merge(parts, 5, rng);
    ASSERT_EQ(m.entries.size(), 5u);
    EXPECT_NEAR(m.adjusted_total(), total, 1e-9 * total);
    EXPECT_NEAR(m.total_weight_seen, total, 1e-9 * total);
    EXPECT_EQ(m.items_seen, 30u);
    for (const auto& e : m.entries) {
      EXPECT_DOUBLE_EQ(e.adjusted_weight,
                       std::max(e.original_weight, m.threshold));
    }
  }
}

TEST(Merge, MatchesDirectReservoirInDistribution) {
  const auto items = thirty_items();
  const double tau = ipps_threshold(weights_of(items), 5);
  std::map<std::string, int> merged_hits, direct_hits;
  constexpr int kTrials = 20000;
  RandomSource rng(11);
  for (int t = 0; t < kTrials; ++t) {
    const auto parts = split_and_sample(items, rng);
    for (const auto& e : merge(parts, 5, rng).entries) ++merged_hits[e.key];
    for (const auto& e : varopt_sample(items, 5, rng).entries) {
      ++direct_hits[e.key];
    }
  }
  for (const auto& it : items) {
    const double p = inclusion_probability(it.weight, tau);
    const double se = testing::binomial_se(p, kTrials);
    const double fm = static_cast<double>(merged_hits[it.key]) / kTrials;
    const double fd = static_cast<double>(direct_hits[it.key]) / kTrials;
    EXPECT_NEAR(fm, p, 4 * se) << it.key;
    EXPECT_NEAR(fd, p, 4 * se) << it.key;
    EXPECT_NEAR(fm, fd, 4 * std::sqrt(2.0) * se) << it.key;
  }
}

TEST(Merge, AssociativeInDistribution) {
  const auto items = thirty_items();
  constexpr int kTrials = 20000;
  std::map<std::string, int> left, right;
  RandomSource rng(12);
  for (int t = 0; t < kTrials; ++t) {
    const auto parts = split_and_sample(items, rng);
    // Inner merges use k = 5 so each intermediate satisfies k_x >= k.
    const std::vector<Sample> ab_in = {parts[0], parts[1]};
    const std::vector<Sample> l = {merge(ab_in, 5, rng), parts[2]};
    for (const auto& e : merge(l, 5, rng).entries) ++left[e.key];
    const std::vector<Sample> bc_in = {parts[1], parts[2]};
    const std::vector<Sample> r = {parts[0], merge(bc_in, 5, rng)};
    for (const auto& e : merge(r, 5, rng).entries) ++right[e.key];
  }
  for (const auto& it : items) {
    const double fl = static_cast<double>(left[it.key]) / kTrials;
    const double fr = static_cast<double>(right[it.key]) / kTrials;
    const double p = 0.5 * (fl + fr);
    EXPECT_NEAR(fl, fr, 4 * std::sqrt(2.0) * testing::binomial_se(p, kTrials))
        << it.key;
  }
}

}  // namespace
}  // namespace varopt
