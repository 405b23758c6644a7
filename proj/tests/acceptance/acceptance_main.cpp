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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "varopt/baselines.hpp"
#include "varopt/chernoff.hpp"
#include "varopt/empirical.hpp"
#include "varopt/instances.hpp"
#include "varopt/merge.hpp"
#include "varopt/reservoir.hpp"
#include "varopt/threshold.hpp"
#include "varopt/variance.hpp"

namespace varopt {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed sub-check; the first few are kept in the detail line.
  void fail(const std::string& what) {
    if (pass || failures < 3) detail << " [" << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Fixed 20-item heavy-tailed instance shared by several criteria.
std::vector<WeightedItem> twenty_items() {
  RandomSource gen(derive_seed(kSeed, "twenty", 0));
  return pareto_instance(20, 1.0, gen);
}

double se_of_mean(double variance, double trials) {
  return std::sqrt(std::max(variance, 0.0) / trials);
}

// 1. Exact total and exact size on random streams.
void exact_total_and_size(Outcome& o) {
  const auto start = Clock::now();
  RandomSource gen(derive_seed(kSeed, "streams", 0));
  constexpr std::size_t kKs[] = {1, 2, 5, 17};
  std::size_t realizations = 0;
  for (int stream = 0; stream < 1000; ++stream) {
    const std::size_t n = 1 + gen.uniform_index(200);
    const auto items = stream % 2 == 0 ? pareto_instance(n, 1.1, gen)
                                       : uniform_instance(n, 0.1, 10.0, gen);
    const double total = std::accumulate(
        items.begin(), items.end(), 0.0,
        [](double s, const WeightedItem& it) { return s + it.weight; });
    const std::size_t k = kKs[stream % 4];
    for (Implementation impl :
         {Implementation::kTree, Implementation::kAmortized}) {
      RandomSource rng(trial_seed(kSeed, stream));
      const Sample s = varopt_sample(items, k, rng, impl);
      ++realizations;
      if (s.entries.size() != std::min(k, n)) {
        o.fail("size " + std::to_string(s.entries.size()) + " at stream " +
               std::to_string(stream));
      }
      if (std::abs(s.adjusted_total() - total) > 1e-9 * total) {
        o.fail("total off at stream " + std::to_string(stream));
      }
    }
  }
  const double secs = seconds_since(start);
  if (secs >= 10.0) o.fail("runtime " + num(secs) + " s");
  o.detail << " realizations=" << realizations << " runtime=" << num(secs)
           << "s";
}

// Shared by criteria 2, 3 and 6.
void check_marginals(Outcome& o, const EmpiricalReport& rep,
                     const std::vector<WeightedItem>& items, std::size_t k,
                     bool check_means) {
  const auto w = weights_of(items);
  const double tau = testing::bisect_threshold(w, static_cast<double>(k));
  const double trials = static_cast<double>(rep.variance.trials);
  double worst_z = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double p = std::min(1.0, w[i] / tau);
    const double z = std::abs(rep.inclusion_frequency[i] - p) /
                     testing::binomial_se(p, trials);
    worst_z = std::max(worst_z, z);
    if (z > 4.0) o.fail("item " + std::to_string(i) + " frequency z=" + num(z));
    if (check_means) {
      const double se = se_of_mean(rep.item_variance[i], trials);
      const double gap = std::abs(rep.mean[i] - w[i]);
      if (gap > 4 * se + 1e-9 * w[i]) {
        o.fail("item " + std::to_string(i) + " mean off by " + num(gap));
      }
    }
  }
  o.detail << " worst_frequency_z=" << num(worst_z);
}

EmpiricalReport twenty_item_report(const std::string& scheme) {
  EmpiricalOptions opt;
  opt.trials = 200000;
  opt.seed = derive_seed(kSeed, "marginals", 0);
  return empirical_report(*scheme_by_name(scheme), twenty_items(), 5, opt);
}

// 2. ipps marginals and per-item unbiasedness.
void ipps_marginals(Outcome& o, const EmpiricalReport& rep, double secs) {
  check_marginals(o, rep, twenty_items(), 5, true);
  if (secs >= 60.0) o.fail("runtime " + num(secs) + " s");
  o.detail << " trials=" << rep.variance.trials << " runtime=" << num(secs)
           << "s";
}

// 3. SigmaV optimality and zero VSigma.
void sigma_v_optimality(Outcome& o, const EmpiricalReport& rep) {
  const double analytic = sigma_v_analytic(weights_of(twenty_items()), 5);
  const double rel = std::abs(rep.variance.sigma_v / analytic - 1.0);
  if (rel > 0.02) o.fail("SigmaV off by " + num(100 * rel) + "%");
  if (!(rep.variance.v_sigma < 1e-12)) {
    o.fail("VSigma " + num(rep.variance.v_sigma));
  }
  const std::vector<double> four = {1, 2, 3, 4};
  if (std::abs(sigma_v_analytic(four, 2) - 20.0) > 1e-12) {
    o.fail("analytic SigmaV on {1,2,3,4}");
  }
  EmpiricalOptions opt;
  opt.trials = 200000;
  opt.seed = derive_seed(kSeed, "four", 0);
  const auto small = empirical_report(*scheme_by_name("varopt"),
                                      items_from_weights(four), 2, opt);
  if (std::abs(small.variance.sigma_v / 20.0 - 1.0) > 0.02) {
    o.fail("empirical SigmaV on {1,2,3,4} = " + num(small.variance.sigma_v));
  }
  if (!(small.variance.v_sigma < 1e-12)) o.fail("VSigma on {1,2,3,4}");
  o.detail << " empirical=" << num(rep.variance.sigma_v)
           << " analytic=" << num(analytic)
           << " VSigma=" << num(rep.variance.v_sigma)
           << " four_item_SigmaV=" << num(small.variance.sigma_v);
}

// 4. Nonpositive pairwise covariances.
void nonpositive_covariance(Outcome& o) {
  RandomSource gen(derive_seed(kSeed, "ten", 0));
  const auto items = pareto_instance(10, 1.5, gen);
  const std::size_t n = items.size();
  constexpr std::size_t kTrials = 200000;
  std::vector<double> sum(n), prod(n * n), prod_sq(n * n);
  run_trials(*scheme_by_name("varopt"), items, 4, kTrials,
             derive_seed(kSeed, "covariance", 0),
             [&](std::size_t, std::span<const double> est) {
               std::vector<double> e(n);
               for (std::size_t i = 0; i < n; ++i) {
                 e[i] = est[i] - items[i].weight;
                 sum[i] += e[i];
               }
               for (std::size_t i = 0; i < n; ++i) {
                 for (std::size_t j = i + 1; j < n; ++j) {
                   const double x = e[i] * e[j];
                   prod[i * n + j] += x;
                   prod_sq[i * n + j] += x * x;
                 }
               }
             });
  double max_z = -INFINITY, max_cov = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double t = kTrials;
      const double m = prod[i * n + j] / t;
      const double cov = m - (sum[i] / t) * (sum[j] / t);
      const double se = std::sqrt(std::max(prod_sq[i * n + j] / t - m * m, 0.0) / t);
      max_cov = std::max(max_cov, cov);
      if (se > 0) max_z = std::max(max_z, cov / se);
      if (cov > 4 * se + 1e-12) {
        o.fail("Cov(" + std::to_string(i) + "," + std::to_string(j) +
               ")=" + num(cov) + " se=" + num(se));
      }
    }
  }
  o.detail << " max_cov=" << num(max_cov) << " max_z=" << num(max_z);
}

// 5. Tree vs naive oracle and fast path on vs off, per realization.
void oracle_equivalence(Outcome& o) {
  std::size_t compared = 0;
  auto same = [&](const Sample& a, const Sample& b, const std::string& what) {
    ++compared;
    bool ok = a.entries.size() == b.entries.size();
    for (std::size_t i = 0; ok && i < a.entries.size(); ++i) {
      const auto& x = a.entries[i];
      const auto& y = b.entries[i];
      ok = x.key == y.key &&
           std::abs(x.adjusted_weight - y.adjusted_weight) <=
               1e-9 * std::max(x.adjusted_weight, y.adjusted_weight);
    }
    if (!ok) o.fail(what);
  };
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomSource gen(derive_seed(kSeed, "oracle", seed));
    const auto items = seed % 2 ? pareto_instance(100, 0.8, gen)
                                : uniform_instance(100, 0.5, 2.0, gen);
    const std::size_t k = 1 + gen.uniform_index(30);
    auto run = [&](Implementation impl, bool fast) {
      RandomSource rng(derive_seed(kSeed, "oracle-run", seed));
      return varopt_sample(items, k, rng, impl, {fast});
    };
    const Sample naive = run(Implementation::kNaive, false);
    const Sample tree_fast = run(Implementation::kTree, true);
    const Sample tree_slow = run(Implementation::kTree, false);
    same(tree_fast, naive, "tree vs naive seed " + std::to_string(seed));
    same(tree_slow, naive, "tree(no fast path) vs naive seed " + std::to_string(seed));
    same(tree_fast, tree_slow, "tree fast path seed " + std::to_string(seed));
    same(run(Implementation::kAmortized, true),
         run(Implementation::kAmortized, false),
         "amortized fast path seed " + std::to_string(seed));
  }
  o.detail << " comparisons=" << compared;
}

// 6. Amortized implementation marginals.
void amortized_marginals(Outcome& o) {
  check_marginals(o, twenty_item_report("varopt_amortized"), twenty_items(), 5,
                  true);
}

// 7. Merge of three independently sampled parts vs direct sampling.
void merge_equivalence(Outcome& o) {
  RandomSource gen(derive_seed(kSeed, "thirty", 0));
  const auto items = pareto_instance(30, 1.2, gen);
  const auto w = weights_of(items);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double tau = testing::bisect_threshold(w, 5);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) index[items[i].key] = i;
  constexpr std::size_t kTrials = 100000;
  std::vector<double> merged(30), direct(30);
  std::size_t total_failures = 0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    RandomSource rng(trial_seed(derive_seed(kSeed, "merge", 0), t));
    std::vector<Sample> parts;
    for (std::size_t p = 0; p < 3; ++p) {
      const std::span<const WeightedItem> part(items.data() + 10 * p, 10);
      parts.push_back(varopt_sample(part, 5 + p, rng));
    }
    const Sample m = merge(parts, 5, rng);
    if (m.entries.size() != 5 ||
        std::abs(m.adjusted_total() - total) > 1e-9 * total) {
      ++total_failures;
    }
    for (const auto& e : m.entries) merged[index[e.key]] += 1;
    for (const auto& e : varopt_sample(items, 5, rng).entries) {
      direct[index[e.key]] += 1;
    }
  }
  if (total_failures) {
    o.fail(std::to_string(total_failures) + " realizations lost the total");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    const double p = std::min(1.0, w[i] / tau);
    const double se = testing::binomial_se(p, kTrials);
    const double fm = merged[i] / kTrials, fd = direct[i] / kTrials;
    worst = std::max({worst, std::abs(fm - fd) / (std::sqrt(2.0) * se),
                      std::abs(fm - p) / se, std::abs(fd - p) / se});
    if (std::abs(fm - fd) > 4 * std::sqrt(2.0) * se) {
      o.fail("item " + std::to_string(i) + " merged vs direct");
    }
    if (std::abs(fm - p) > 4 * se) o.fail("item " + std::to_string(i) + " merged vs ipps");
    if (std::abs(fd - p) > 4 * se) o.fail("item " + std::to_string(i) + " direct vs ipps");
  }
  o.detail << " worst_z=" << num(worst) << " trials=" << kTrials;
}

// 8. Variance ratios between VarOpt, Poisson ipps and priority sampling.
void variance_ratios(Outcome& o) {
  RandomSource gen(derive_seed(kSeed, "hundred", 0));
  const auto items = pareto_instance(100, 1.0, gen);
  EmpiricalOptions opt;
  opt.trials = 100000;
  opt.seed = derive_seed(kSeed, "ratios", 0);
  opt.covariance_limit = 0;
  const std::size_t k = 10;
  const auto vo = empirical_report(*scheme_by_name("varopt"), items, k, opt);
  const auto po = empirical_report(*scheme_by_name("poisson"), items, k, opt);
  // Priority sampling is compared with one extra sample.
  const auto pr =
      empirical_report(*scheme_by_name("priority"), items, k + 1, opt);
  const double analytic = sigma_v_analytic(weights_of(items), k);
  const double poisson_ratio = po.variance.v_sigma / po.variance.sigma_v;
  const double w_ratio = w_p(po.variance.sigma_v, po.variance.v_sigma, 0.5) /
                         w_p(vo.variance.sigma_v, vo.variance.v_sigma, 0.5);
  const double priority_rel = pr.variance.sigma_v / analytic;
  if (poisson_ratio < 0.95 || poisson_ratio > 1.05) o.fail("Poisson VSigma/SigmaV");
  if (w_ratio < 1.8 || w_ratio > 2.2) o.fail("W_1/2 ratio");
  if (std::abs(priority_rel - 1.0) > 0.1) o.fail("priority SigmaV");
  o.detail << " poisson_VSigma/SigmaV=" << num(poisson_ratio)
           << " W_half_ratio=" << num(w_ratio)
           << " priority(k+1)_SigmaV/analytic=" << num(priority_rel);
}

// 9. V_m against brute-force subset averages of empirical variances.
void v_m_formula(Outcome& o) {
  double worst = 0.0;
  RandomSource gen(derive_seed(kSeed, "vm", 0));
  int instances = 0;
  for (std::size_t n : {4, 6, 8}) {
    const auto items = pareto_instance(n, 1.2, gen);
    for (const char* scheme : {"varopt", "poisson", "priority"}) {
      EmpiricalOptions opt;
      opt.trials = 50000;
      opt.seed = derive_seed(kSeed, scheme, n);
      const std::size_t k = n / 2;
      const auto rep = empirical_report(*scheme_by_name(scheme), items, k, opt);
      ++instances;
      for (std::size_t m = 1; m <= n; ++m) {
        double sum = 0.0;
        std::size_t count = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
          double v = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            for (std::size_t j = 0; j < n; ++j) {
              if (mask >> j & 1) v += rep.cov(i, j);
            }
          }
          sum += v;
          ++count;
        }
        const double brute = sum / count;
        const double formula =
            v_m(rep.variance.sigma_v, rep.variance.v_sigma, n, m);
        // Relative 5%, with a floor for the exactly-zero VarOpt total.
        const double scale = std::max(std::abs(brute), std::abs(formula));
        const double gap = std::abs(brute - formula);
        if (gap > 0.05 * scale + 1e-9 * rep.variance.sigma_v) {
          o.fail(std::string(scheme) + " n=" + std::to_string(n) +
                 " m=" + std::to_string(m));
        }
        if (scale > 1e-9 * rep.variance.sigma_v) worst = std::max(worst, gap / scale);
      }
    }
  }
  o.detail << " instances=" << instances << " worst_rel_gap=" << num(worst);
}

// 10. Chernoff bounds dominate empirical light-count tails; spot values.
void chernoff_domination(Outcome& o) {
  const auto items = twenty_items();
  const auto w = weights_of(items);
  const double tau = testing::bisect_threshold(w, 5);
  std::vector<std::size_t> light;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < tau) light.push_back(i);
  }
  // Subsets of the light items: all of them and random halves.
  RandomSource gen(derive_seed(kSeed, "subsets", 0));
  std::vector<std::vector<std::size_t>> subsets = {light};
  for (int s = 0; s < 6; ++s) {
    std::vector<std::size_t> sub;
    for (std::size_t i : light) {
      if (gen.uniform() < 0.5) sub.push_back(i);
    }
    if (sub.size() >= 3) subsets.push_back(sub);
  }
  constexpr std::size_t kTrials = 200000;
  std::vector<std::vector<double>> counts(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    counts[s].assign(subsets[s].size() + 1, 0.0);
  }
  run_trials(*scheme_by_name("varopt"), items, 5, kTrials,
             derive_seed(kSeed, "chernoff", 0),
             [&](std::size_t, std::span<const double> est) {
               for (std::size_t s = 0; s < subsets.size(); ++s) {
                 std::size_t x = 0;
                 for (std::size_t i : subsets[s]) x += est[i] != 0.0;
                 counts[s][x] += 1;
               }
             });
  std::size_t checked = 0;
  double min_slack = INFINITY;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    const double m = static_cast<double>(subsets[s].size());
    double mu = 0.0;
    for (std::size_t i : subsets[s]) mu += w[i] / tau;
    for (std::size_t a = 1; a + 1 <= subsets[s].size(); ++a) {
      const double ad = static_cast<double>(a);
      if (std::abs(ad - mu) < 1e-9) continue;
      double tail = 0.0;
      if (ad > mu) {
        for (std::size_t x = a; x < counts[s].size(); ++x) tail += counts[s][x];
      } else {
        for (std::size_t x = 0; x <= a; ++x) tail += counts[s][x];
      }
      tail /= kTrials;
      const double bound = chernoff_bound(m, mu, ad);
      const double slack =
          bound + 4 * testing::binomial_se(tail, kTrials) - tail;
      min_slack = std::min(min_slack, slack);
      ++checked;
      if (slack < 0) o.fail("subset " + std::to_string(s) + " a=" + std::to_string(a));
    }
  }
  const double spot4 = chernoff_bound(10, 2, 4);
  const double spot1 = chernoff_bound(10, 2, 1);
  if (std::abs(spot4 - 0.35117) > 1e-4) o.fail("spot a=4: " + num(spot4));
  if (std::abs(spot1 - 0.68553) > 1e-4) {
    o.fail("spot a=1: got " + num(spot1) + ", expected 0.68553");
  }
  o.detail << " tail_checks=" << checked << " min_slack=" << num(min_slack)
           << " spot(a=4)=" << num(spot4) << " spot(a=1)=" << num(spot1);
}

// 11. Bad instance: ppswor wastes about ln k draws on unit items.
void bad_instance_statistic(Outcome& o) {
  const std::size_t k = 100, ell = 10000;
  const auto items = bad_instance(k, ell);
  constexpr std::size_t kTrials = 10000;
  double units = 0.0;
  RandomSource rng(derive_seed(kSeed, "ppswor", 0));
  for (std::size_t t = 0; t < kTrials; ++t) {
    for (const std::string& key : ppswor_order(items, k, rng)) {
      units += key[0] == 'u';
    }
  }
  const double mean = units / kTrials;
  const double lo = 0.5 * std::log(k), hi = 1.5 * std::log(k);
  if (mean < lo || mean > hi) o.fail("mean unit count " + num(mean));
  const double sv = sigma_v_analytic(weights_of(items), k);
  const double ell2 = static_cast<double>(ell) * ell;
  if (!(sv < ell2)) o.fail("SigmaV " + num(sv) + " >= ell^2");
  o.detail << " mean_units=" << num(mean) << " band=[" << num(lo) << ","
           << num(hi) << "] SigmaV=" << num(sv) << " ell^2=" << num(ell2);
}

// 12. Throughput shape of the tree implementation.
void performance_shape(Outcome& o) {
  const auto start = Clock::now();
  constexpr std::size_t kN = 1000000;
  RandomSource gen(derive_seed(kSeed, "perf", 0));
  auto items = pareto_instance(kN, 1.0, gen);
  std::mt19937_64 shuffler(derive_seed(kSeed, "shuffle", 0));
  std::shuffle(items.begin(), items.end(), shuffler);
  for (std::size_t i = 0; i < items.size(); ++i) items[i].arrival_index = i;

  auto timed = [&](std::size_t k, double* simple_fraction) {
    std::vector<double> runs;
    for (int rep = 0; rep < 3; ++rep) {
      const auto reservoir = make_reservoir(k, Implementation::kTree);
      RandomSource rng(derive_seed(kSeed, "perf-run", k));
      const auto t0 = Clock::now();
      for (const WeightedItem& it : items) reservoir->insert(it, rng);
      runs.push_back(seconds_since(t0));
      const auto& c = reservoir->counters();
      if (simple_fraction) {
        *simple_fraction = static_cast<double>(c.simple_steps) /
                           static_cast<double>(c.simple_steps + c.full_steps);
      }
    }
    std::sort(runs.begin(), runs.end());
    return runs[1];
  };
  double simple = 0.0;
  timed(1000, &simple);
  const double t64 = timed(64, nullptr);
  const double t4096 = timed(4096, nullptr);
  const double total = seconds_since(start);
  if (!(simple > 0.95)) o.fail("simple fraction " + num(simple));
  if (t4096 > 3 * t64) o.fail("k=4096 time " + num(t4096 / t64) + "x k=64");
  if (total >= 120) o.fail("runtime " + num(total) + " s");
  o.detail << " simple_fraction(k=1000)=" << num(simple)
           << " t64=" << num(t64) << "s t4096=" << num(t4096)
           << "s ratio=" << num(t4096 / t64) << " runtime=" << num(total)
           << "s";
}

}  // namespace
}  // namespace varopt

int main() {
  using namespace varopt;
  int failed = 0;
  auto report = [&](int id, const char* name,
                    const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
      body(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };

  report(1, "exact total and size", exact_total_and_size);
  const auto start = Clock::now();
  const EmpiricalReport twenty = twenty_item_report("varopt");
  const double secs = seconds_since(start);
  report(2, "ipps marginals",
         [&](Outcome& o) { ipps_marginals(o, twenty, secs); });
  report(3, "SigmaV optimality",
         [&](Outcome& o) { sigma_v_optimality(o, twenty); });
  report(4, "nonpositive covariance", nonpositive_covariance);
  report(5, "oracle equivalence", oracle_equivalence);
  report(6, "amortized marginals", amortized_marginals);
  report(7, "merge equivalence", merge_equivalence);
  report(8, "variance ratios", variance_ratios);
  report(9, "V_m formula", v_m_formula);
  report(10, "Chernoff domination", chernoff_domination);
  report(11, "bad instance statistic", bad_instance_statistic);
  report(12, "performance shape", performance_shape);
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
