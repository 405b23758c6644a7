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

#include "varopt/empirical.hpp"

#include <algorithm>
#include <string>
#include <thread>
#include <unordered_map>

#include "varopt/errors.hpp"

namespace varopt {
namespace {

using KeyIndex = std::unordered_map<std::string, std::size_t>;

KeyIndex index_keys(std::span<const WeightedItem> items) {
  KeyIndex index;
  index.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!index.emplace(items[i].key, i).second) {
      throw DomainError("duplicate key '" + items[i].key + "'");
    }
  }
  return index;
}

void scatter(const Sample& sample, const KeyIndex& index,
             std::vector<double>& estimates) {
  std::fill(estimates.begin(), estimates.end(), 0.0);
  for (const SampleEntry& e : sample.entries) {
    const auto it = index.find(e.key);
    if (it == index.end()) {
      throw DomainError("sample holds unknown key '" + e.key + "'");
    }
    estimates[it->second] += e.adjusted_weight;
  }
}

// Sums over a block of trials of errors (estimate - true weight), which
// keeps the running sums near zero.
struct Accumulator {
  std::size_t trials = 0;
  std::vector<double> sum, sum_sq, included, cross;
  double total_sum = 0.0, total_sum_sq = 0.0, sse = 0.0;

  Accumulator(std::size_t n, bool with_cov)
      : sum(n), sum_sq(n), included(n), cross(with_cov ? n * n : 0) {}

  void add(std::span<const double> estimates,
           std::span<const WeightedItem> items,
           std::span<const std::size_t> partition, std::size_t cells,
           std::vector<double>& err, std::vector<double>& cell_err) {
    const std::size_t n = items.size();
    ++trials;
    double total_err = 0.0;
    std::fill(cell_err.begin(), cell_err.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = estimates[i] - items[i].weight;
      sum[i] += err[i];
      sum_sq[i] += err[i] * err[i];
      if (estimates[i] != 0.0) included[i] += 1.0;
      total_err += err[i];
      cell_err[partition.empty() ? 0 : partition[i]] += err[i];
    }
    total_sum += total_err;
    total_sum_sq += total_err * total_err;
    for (std::size_t c = 0; c < cells; ++c) sse += cell_err[c] * cell_err[c];
    if (!cross.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        if (err[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) cross[i * n + j] += err[i] * err[j];
      }
    }
  }

  void absorb(const Accumulator& o) {
    trials += o.trials;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
      included[i] += o.included[i];
    }
    for (std::size_t i = 0; i < cross.size(); ++i) cross[i] += o.cross[i];
    total_sum += o.total_sum;
    total_sum_sq += o.total_sum_sq;
    sse += o.sse;
  }
};

double sample_variance(double sum, double sum_sq, std::size_t n) {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  return std::max(0.0, (sum_sq - sum * sum / nn) / (nn - 1));
}

// Fixed block count so the floating-point summation order, and with it the
// result, does not depend on the number of threads.
constexpr std::size_t kBlocks = 16;

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, "trial", index);
}

void run_trials(
    const Scheme& scheme, std::span<const WeightedItem> items, std::size_t k,
    std::size_t trials, std::uint64_t seed,
    const std::function<void(std::size_t, std::span<const double>)>& visit) {
  const KeyIndex index = index_keys(items);
  std::vector<double> estimates(items.size());
  for (std::size_t t = 0; t < trials; ++t) {
    RandomSource rng(trial_seed(seed, t));
    scatter(scheme(items, k, rng), index, estimates);
    visit(t, estimates);
  }
}

EmpiricalReport empirical_report(const Scheme& scheme,
                                 std::span<const WeightedItem> items,
                                 std::size_t k,
                                 const EmpiricalOptions& options) {
  if (options.trials == 0) throw DomainError("empirical_report: trials = 0");
  const std::size_t n = items.size();
  if (!options.partition.empty() && options.partition.size() != n) {
    throw DomainError("empirical_report: partition size mismatch");
  }
  const std::size_t cells =
      options.partition.empty()
          ? 1
          : *std::max_element(options.partition.begin(),
                              options.partition.end()) + 1;
  const bool with_cov = n <= options.covariance_limit;
  const KeyIndex index = index_keys(items);

  const std::size_t blocks = std::min(kBlocks, options.trials);
  std::vector<Accumulator> acc(blocks, Accumulator(n, with_cov));
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = options.trials * b / blocks;
    const std::size_t end = options.trials * (b + 1) / blocks;
    std::vector<double> estimates(n), err(n), cell_err(cells);
    for (std::size_t t = begin; t < end; ++t) {
      RandomSource rng(trial_seed(options.seed, t));
      scatter(scheme(items, k, rng), index, estimates);
      acc[b].add(estimates, items, options.partition, cells, err, cell_err);
    }
  };

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, blocks);
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < blocks; b += threads) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Accumulator total(n, with_cov);
  for (const auto& a : acc) total.absorb(a);

  const std::size_t trials = total.trials;
  const double tt = static_cast<double>(trials);
  EmpiricalReport report;
  report.mean.resize(n);
  report.item_variance.resize(n);
  report.inclusion_frequency.resize(n);
  double sigma_v = 0.0;
  double weight_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    report.mean[i] = items[i].weight + total.sum[i] / tt;
    report.item_variance[i] =
        sample_variance(total.sum[i], total.sum_sq[i], trials);
    report.inclusion_frequency[i] = total.included[i] / tt;
    sigma_v += report.item_variance[i];
    weight_total += items[i].weight;
  }
  if (with_cov) {
    report.covariance.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        report.covariance[i * n + j] =
            trials < 2 ? 0.0
                       : (total.cross[i * n + j] -
                          total.sum[i] * total.sum[j] / tt) /
                             (tt - 1);
      }
    }
  }
  report.total_mean = weight_total + total.total_sum / tt;
  report.sse_mean = total.sse / tt;
  report.variance.sigma_v = sigma_v;
  report.variance.v_sigma =
      sample_variance(total.total_sum, total.total_sum_sq, trials);
  report.variance.n = n;
  report.variance.source = ReportSource::kEmpirical;
  report.variance.trials = trials;
  return report;
}

}  // namespace varopt
