// Copyright 2026 The SBL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbl/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbl/error.hpp"

namespace sbl {

double zeta(double alpha, double tol) {
  if (!(alpha > 1.0 + 1e-6)) throw Error(ErrorKind::divergent_series, "zeta requires alpha > 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::config, "zeta tolerance must be positive");
  const double a = alpha;
  // First omitted Euler-Maclaurin term: a(a+1)(a+2)(a+3)(a+4) N^{-a-5} / 30240.
  auto tail_error = [a](double n) { return a * (a + 1) * (a + 2) * (a + 3) * (a + 4) * std::pow(n, -a - 5) / 30240.0; };
  double n = 8.0;
  while (tail_error(n) > tol && n < 1e6) n *= 2.0;
  const auto terms = static_cast<std::int64_t>(n);
  double sum = 0.0;
  // Smallest terms first.
  for (std::int64_t j = terms; j >= 1; --j) sum += std::pow(static_cast<double>(j), -a);
  const double tail = std::pow(n, 1 - a) / (a - 1) - 0.5 * std::pow(n, -a) + a * std::pow(n, -a - 1) / 12.0 -
                      a * (a + 1) * (a + 2) * std::pow(n, -a - 3) / 720.0;
  return sum + tail;
}

Thm1Bounds thm1_bounds(double sigma1_sq, double r_max, double alpha) {
  if (!(r_max > 0.0)) throw Error(ErrorKind::insufficient_data, "r_max must be positive");
  if (!(sigma1_sq > 0.0)) throw Error(ErrorKind::degenerate, "sigma1 must be positive");
  const double z1 = zeta(alpha);
  const double z2 = zeta(2 * alpha);
  Thm1Bounds out;
  out.precondition_violated = sigma1_sq < r_max;
  const double radicand = 1.0 - r_max * (z1 - 1.0) / sigma1_sq;
  if (radicand < 0.0) {
    out.vacuous = true;
    out.general = 0.0;
  } else {
    out.general = std::clamp(sigma1_sq / (r_max * std::sqrt(z2)) * std::sqrt(radicand), 0.0, 1.0);
  }
  if (alpha > 2.0) out.simple = std::sqrt((2.0 - z1) / z2);
  return out;
}

Thm2Bound thm2_bound(const Eigen::VectorXd& singular_values, const Eigen::VectorXd& p1, double alpha) {
  if (singular_values.size() == 0 || !(singular_values[0] > 0.0)) {
    throw Error(ErrorKind::degenerate, "largest singular value must be positive");
  }
  const double ratio = singular_values.sum() / singular_values[0];
  Thm2Bound out;
  out.x = std::sqrt(2.0 * zeta(2 * alpha)) / (1.0 - std::pow(2.0, -alpha)) * (ratio - 1.0);
  if (p1.size() == 0) return out;
  const auto above = (p1.array() > out.x).count();
  out.bound = static_cast<double>(above) / static_cast<double>(p1.size());
  return out;
}

double observed_top1_ratio(const Embeddings& e, const PopularityVector& r) {
  if (static_cast<Index>(r.values.size()) != e.n_items()) {
    throw Error(ErrorKind::config, "popularity length differs from item count");
  }
  if (e.n_users() == 0) return 0.0;
  const Index l = r.argmax();
  const Index n = e.n_users();
  constexpr Index kBlock = 256;
  Index wins = 0;
  Eigen::MatrixXd scores;
  for (Index start = 0; start < n; start += kBlock) {
    const Index rows = std::min(kBlock, n - start);
    scores.noalias() = e.users.middleRows(start, rows) * e.items.transpose();
    for (Index u = 0; u < rows; ++u) {
      const double target = scores(u, l);
      bool strict = true;
      for (Index i = 0; i < e.n_items() && strict; ++i) {
        if (i != l && !(scores(u, i) < target)) strict = false;
      }
      if (strict) ++wins;
    }
  }
  return static_cast<double>(wins) / static_cast<double>(n);
}

double sv_trajectory(double s, double sigma0, double t) {
  if (!(s > 0.0) || !(sigma0 > 0.0)) throw Error(ErrorKind::config, "trajectory needs s > 0 and sigma0 > 0");
  const double decay = std::exp(-2.0 * s * t);
  return s / (1.0 + (s / sigma0 - 1.0) * decay);
}

BoundReport bound_report(const Embeddings& e, const InteractionMatrix& train) {
  if (train.n_items() != e.n_items() || train.n_users() != e.n_users()) {
    throw Error(ErrorKind::config, "checkpoint and interaction matrix disagree on dimensions");
  }
  const auto r = popularity(train);
  const auto fit = fit_power_law(r);
  const auto spec = spectral_report(e, r.as_vector<double>());
  BoundReport rep;
  rep.alpha = fit.alpha;
  rep.alpha_r_squared = fit.r_squared;
  rep.sigma1 = spec.sigma1;
  rep.r_max = static_cast<double>(r.max());
  rep.observed_cos = spec.cos_r_q1;
  rep.observed_eta = observed_top1_ratio(e, r);
  rep.thm2_applicable = spec.cos_r_q1 >= kThm2AlignmentPremise;
  if (!(fit.alpha > 1.0 + 1e-6)) {
    rep.applicable = false;
    return rep;
  }
  rep.zeta_alpha = zeta(fit.alpha);
  rep.zeta_2alpha = zeta(2 * fit.alpha);
  const auto t1 = thm1_bounds(spec.sigma1 * spec.sigma1, rep.r_max, fit.alpha);
  rep.thm1_general = t1.general;
  rep.thm1_simple = t1.simple;
  rep.thm1_vacuous = t1.vacuous;
  rep.thm1_precondition_violated = t1.precondition_violated;
  rep.thm1_general_satisfied = rep.observed_cos >= rep.thm1_general;
  if (t1.simple) rep.thm1_simple_satisfied = rep.observed_cos >= *t1.simple;
  const auto t2 = thm2_bound(spec.singular_values, spec.p1, fit.alpha);
  rep.thm2_x = t2.x;
  rep.thm2_bound = t2.bound;
  rep.thm2_vacuous = t2.bound == 0.0;
  if (rep.thm2_applicable) rep.thm2_satisfied = rep.observed_eta >= rep.thm2_bound;
  return rep;
}

}  // namespace sbl
