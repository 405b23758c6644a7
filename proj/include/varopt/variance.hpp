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

#ifndef VAROPT_VARIANCE_HPP_
#define VAROPT_VARIANCE_HPP_

#include <cstddef>
#include <span>
#include <string>

namespace varopt {

enum class ReportSource { kAnalytic, kEmpirical };

// sigma_v is the sum of per-item estimate variances (SigmaV); v_sigma is
// the variance of the estimated grand total (VSigma).
struct VarianceReport {
  double sigma_v = 0.0;
  double v_sigma = 0.0;
  std::size_t n = 0;
  ReportSource source = ReportSource::kAnalytic;
  std::size_t trials = 0;  // empirical only
};

// Sum over items below the ipps threshold of w * (tau - w), which is
// w^2 (1/p - 1) with p = w / tau. Zero when k >= n.
double sigma_v_analytic(std::span<const double> weights, std::size_t k);

// Analytic report for a VarOpt_k sample: v_sigma = 0.
VarianceReport analytic_report(std::span<const double> weights,
                               std::size_t k);

// Average variance over all subsets of size m:
//   m/n * ((n-m)/(n-1) * sigma_v + (m-1)/(n-1) * v_sigma).
// Throws DomainError unless n >= 2 and 1 <= m <= n.
double v_m(double sigma_v, double v_sigma, std::size_t n, std::size_t m);

// Expected variance over random subsets that contain each item
// independently with probability p: p * ((1-p) * sigma_v + p * v_sigma).
double w_p(double sigma_v, double v_sigma, double p);

// Expected variance of sum_i xi_i * w_hat_i for i.i.d. auxiliary
// multipliers xi: Var[xi] * sigma_v + E[xi]^2 * v_sigma.
double aux_variance(double sigma_v, double v_sigma, double xi_mean,
                    double xi_var);

std::string to_tsv(const VarianceReport& report, bool with_header = true);
std::string summary_line(const VarianceReport& report);

}  // namespace varopt

#endif  // VAROPT_VARIANCE_HPP_
