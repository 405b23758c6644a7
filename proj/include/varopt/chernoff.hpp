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

#ifndef VAROPT_CHERNOFF_HPP_
#define VAROPT_CHERNOFF_HPP_

namespace varopt {

// Tail bound for a count X of m dependent 0/1 variables whose high-order
// inclusion and exclusion probabilities are bounded by products of the
// marginals, with E[X] = mu:
//
//   ((m - mu) / (m - a))^(m - a) * (mu / a)^a
//
// bounds P(X >= a) for a >= mu and P(X <= a) for a <= mu. Evaluated in
// log space. Throws DomainError unless 0 < a < m and 0 < mu < m.
double chernoff_bound(double m, double mu, double a);

// The m -> infinity limit e^(a - mu) * (mu / a)^a, which dominates the
// finite-m bound. Throws DomainError unless a > 0 and mu > 0.
double chernoff_bound_loose(double mu, double a);

// Natural log of the bounds above, extended to the end points by
// continuity: a = 0 gives m*log(1 - mu/m) (or -mu when m is infinite) and
// a = m gives m*log(mu/m). Pass m = +inf for the loose form.
double chernoff_log_bound(double m, double mu, double a);

}  // namespace varopt

#endif  // VAROPT_CHERNOFF_HPP_
