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

#ifndef VAROPT_ORDER_STATISTIC_TREE_HPP_
#define VAROPT_ORDER_STATISTIC_TREE_HPP_

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "varopt/random.hpp"

namespace varopt {

// Balanced search tree (treap) over distinct values, where every subtree
// carries its element count and weight sum. Supports rank queries and a
// monotone-predicate descent that sees, at each node, the count and weight
// of everything up to and including that node. All operations are
// O(log n) expected; priorities come from a fixed hash sequence so the
// shape is deterministic.
template <typename Value, typename Less = std::less<Value>>
class OrderStatisticTree {
 public:
  struct Found {
    std::size_t rank = 0;  // number of elements before this one
    const Value* value = nullptr;
    double weight = 0.0;
    double sum_before = 0.0;
  };

  OrderStatisticTree() = default;

  std::size_t size() const { return count(root_); }
  bool empty() const { return root_ == kNil; }
  double total_weight() const { return sum(root_); }

  void clear() {
    nodes_.clear();
    free_.clear();
    root_ = kNil;
  }

  void insert(const Value& value, double weight) {
    const Index node = allocate(value, weight);
    auto [lo, hi] = split(root_, value, /*or_equal=*/false);
    assert(hi == kNil || less_(value, leftmost(hi).value));
    root_ = merge(merge(lo, node), hi);
  }

  // Returns false if `value` is not present.
  bool erase(const Value& value) {
    auto [lo, rest] = split(root_, value, /*or_equal=*/false);
    auto [mid, hi] = split(rest, value, /*or_equal=*/true);
    const bool found = mid != kNil;
    if (found) {
      assert(count(mid) == 1);
      release(mid);
    }
    root_ = merge(lo, hi);
    return found;
  }

  const Value& front() const {
    assert(!empty());
    return leftmost(root_).value;
  }
  double front_weight() const {
    assert(!empty());
    return leftmost(root_).weight;
  }

  Value pop_front() {
    assert(!empty());
    Value v = front();
    root_ = erase_min(root_);
    return v;
  }

  const Value& select(std::size_t rank) const {
    assert(rank < size());
    Index t = root_;
    for (;;) {
      const std::size_t lc = count(nodes_[t].left);
      if (rank < lc) {
        t = nodes_[t].left;
      } else if (rank == lc) {
        return nodes_[t].value;
      } else {
        rank -= lc + 1;
        t = nodes_[t].right;
      }
    }
  }

  // Number of stored values strictly less than `value`.
  std::size_t rank_of(const Value& value) const {
    std::size_t rank = 0;
    Index t = root_;
    while (t != kNil) {
      if (less_(nodes_[t].value, value)) {
        rank += count(nodes_[t].left) + 1;
        t = nodes_[t].right;
      } else {
        t = nodes_[t].left;
      }
    }
    return rank;
  }

  // First element, in order, for which
  //   pred(value, weight, count_through, sum_through)
  // holds, where count_through / sum_through cover every element up to and
  // including the candidate. `pred` must be monotone (false...false,
  // true...true) along the order.
  template <typename Pred>
  std::optional<Found> find_first(Pred&& pred) const {
    std::optional<Found> best;
    std::size_t count_acc = 0;
    double sum_acc = 0.0;
    Index t = root_;
    while (t != kNil) {
      const Node& n = nodes_[t];
      const std::size_t count_before = count_acc + count(n.left);
      const double sum_before = sum_acc + sum(n.left);
      if (pred(n.value, n.weight, count_before + 1, sum_before + n.weight)) {
        best = Found{count_before, &n.value, n.weight, sum_before};
        t = n.left;
      } else {
        count_acc = count_before + 1;
        sum_acc = sum_before + n.weight;
        t = n.right;
      }
    }
    return best;
  }

  // In-order visit of (value, weight).
  template <typename F>
  void for_each(F&& f) const {
    std::vector<Index> stack;
    Index t = root_;
    while (t != kNil || !stack.empty()) {
      while (t != kNil) {
        stack.push_back(t);
        t = nodes_[t].left;
      }
      t = stack.back();
      stack.pop_back();
      f(nodes_[t].value, nodes_[t].weight);
      t = nodes_[t].right;
    }
  }

 private:
  using Index = std::int32_t;
  static constexpr Index kNil = -1;

  struct Node {
    Value value;
    double weight = 0.0;
    double sum = 0.0;
    std::uint64_t priority = 0;
    std::uint32_t count = 1;
    Index left = kNil;
    Index right = kNil;
  };

  std::size_t count(Index t) const { return t == kNil ? 0 : nodes_[t].count; }
  double sum(Index t) const { return t == kNil ? 0.0 : nodes_[t].sum; }

  void update(Index t) {
    Node& n = nodes_[t];
    n.count = static_cast<std::uint32_t>(1 + count(n.left) + count(n.right));
    n.sum = sum(n.left) + n.weight + sum(n.right);
  }

  const Node& leftmost(Index t) const {
    while (nodes_[t].left != kNil) t = nodes_[t].left;
    return nodes_[t];
  }

  Index allocate(const Value& value, double weight) {
    Index t;
    if (!free_.empty()) {
      t = free_.back();
      free_.pop_back();
    } else {
      t = static_cast<Index>(nodes_.size());
      nodes_.emplace_back();
    }
    Node& n = nodes_[t];
    n.value = value;
    n.weight = weight;
    n.sum = weight;
    n.priority = mix64(++priority_counter_);
    n.count = 1;
    n.left = n.right = kNil;
    return t;
  }

  void release(Index t) { free_.push_back(t); }

  // Splits into (values < key, values >= key), or (<= key, > key) when
  // `or_equal` is set.
  std::pair<Index, Index> split(Index t, const Value& key, bool or_equal) {
    if (t == kNil) return {kNil, kNil};
    Node& n = nodes_[t];
    const bool goes_left =
        or_equal ? !less_(key, n.value) : less_(n.value, key);
    if (goes_left) {
      auto [lo, hi] = split(n.right, key, or_equal);
      nodes_[t].right = lo;
      update(t);
      return {t, hi};
    }
    auto [lo, hi] = split(n.left, key, or_equal);
    nodes_[t].left = hi;
    update(t);
    return {lo, t};
  }

  // Every value in `a` precedes every value in `b`.
  Index merge(Index a, Index b) {
    if (a == kNil) return b;
    if (b == kNil) return a;
    if (nodes_[a].priority > nodes_[b].priority) {
      nodes_[a].right = merge(nodes_[a].right, b);
      update(a);
      return a;
    }
    nodes_[b].left = merge(a, nodes_[b].left);
    update(b);
    return b;
  }

  Index erase_min(Index t) {
    if (nodes_[t].left == kNil) {
      const Index right = nodes_[t].right;
      release(t);
      return right;
    }
    nodes_[t].left = erase_min(nodes_[t].left);
    update(t);
    return t;
  }

  std::vector<Node> nodes_;
  std::vector<Index> free_;
  Index root_ = kNil;
  std::uint64_t priority_counter_ = 0;
  Less less_{};
};

}  // namespace varopt

#endif  // VAROPT_ORDER_STATISTIC_TREE_HPP_
