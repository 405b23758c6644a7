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

#include "varopt/chernoff.hpp"

#include <cmath>
#include <string>

#include "varopt/errors.hpp"

namespace varopt {

double chernoff_log_bound(double m, double mu, double a) {
  if (!(mu > 0.0) || !(a >= 0.0)) {
    throw DomainError("chernoff_log_bound: need mu > 0 and a >= 0");
  }
  // a * log(mu / a), with 0 * log(.) = 0.
  const double head = a > 0.0 ? a * std::log(mu / a) : 0.0;
  if (std::isinf(m)) return head + (a - mu);
  if (!(mu < m) || !(a <= m)) {
    throw DomainError("chernoff_log_bound: need mu < m and a <= m");
  }
  if (a == m) return head;
  // (m - a) * log((m - mu) / (m - a)) = (m - a) * log1p((a - mu) / (m - a))
  return head + (m - a) * std::log1p((a - mu) / (m - a));
}

double chernoff_bound(double m, double mu, double a) {
  if (!(a > 0.0 && a < m)) {
    throw DomainError("chernoff_bound: a = " + std::to_string(a) +
                      " outside (0, m)");
  }
  if (!(mu > 0.0 && mu < m)) {
    throw DomainError("chernoff_bound: mu = " + std::to_string(mu) +
                      " outside (0, m)");
  }
  return std::exp(chernoff_log_bound(m, mu, a));
}

double chernoff_bound_loose(double mu, double a) {
  if (!(a > 0.0) || !(mu > 0.0)) {
    throw DomainError("chernoff_bound_loose: need a > 0 and mu > 0");
  }
  return std::exp(chernoff_log_bound(INFINITY, mu, a));
}

}  // namespace varopt
