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

#include "varopt/variance.hpp"

#include <sstream>

#include "varopt/errors.hpp"
#include "varopt/threshold.hpp"

namespace varopt {

double sigma_v_analytic(std::span<const double> weights, std::size_t k) {
  const double tau = ipps_threshold(weights, k);
  if (tau == 0.0) return 0.0;
  double sum = 0.0;
  for (double w : weights) {
    if (w < tau) sum += w * (tau - w);
  }
  return sum;
}

VarianceReport analytic_report(std::span<const double> weights,
                               std::size_t k) {
  VarianceReport r;
  r.sigma_v = sigma_v_analytic(weights, k);
  r.v_sigma = 0.0;
  r.n = weights.size();
  r.source = ReportSource::kAnalytic;
  return r;
}

double v_m(double sigma_v, double v_sigma, std::size_t n, std::size_t m) {
  if (n < 2) throw DomainError("v_m: need n >= 2");
  if (m < 1 || m > n) throw DomainError("v_m: m outside [1, n]");
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return mm / nn *
         ((nn - mm) / (nn - 1) * sigma_v + (mm - 1) / (nn - 1) * v_sigma);
}

double w_p(double sigma_v, double v_sigma, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("w_p: p outside [0, 1]");
  return p * ((1 - p) * sigma_v + p * v_sigma);
}

double aux_variance(double sigma_v, double v_sigma, double xi_mean,
                    double xi_var) {
  if (!(xi_var >= 0.0)) throw DomainError("aux_variance: negative variance");
  return xi_var * sigma_v + xi_mean * xi_mean * v_sigma;
}

std::string to_tsv(const VarianceReport& report, bool with_header) {
  std::ostringstream out;
  out.precision(17);
  if (with_header) out << "source\tn\ttrials\tsigma_v\tv_sigma\n";
  out << (report.source == ReportSource::kAnalytic ? "analytic" : "empirical")
      << '\t' << report.n << '\t' << report.trials << '\t' << report.sigma_v
      << '\t' << report.v_sigma << '\n';
  return out.str();
}

std::string summary_line(const VarianceReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << (report.source == ReportSource::kAnalytic ? "analytic" : "empirical");
  if (report.source == ReportSource::kEmpirical) {
    out << '(' << report.trials << " trials)";
  }
  out << " n=" << report.n << " SigmaV=" << report.sigma_v
      << " VSigma=" << report.v_sigma;
  return out.str();
}

}  // namespace varopt
