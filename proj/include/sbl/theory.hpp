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

#ifndef SBL_THEORY_HPP
#define SBL_THEORY_HPP

#include <Eigen/Core>
#include <optional>
#include <string>

#include "sbl/embedding.hpp"
#include "sbl/interactions.hpp"
#include "sbl/powerlaw.hpp"
#include "sbl/spectral.hpp"

namespace sbl {

// sum_{j >= 1} j^-alpha: explicit partial sum up to N plus an Euler-Maclaurin
// tail, N picked so the first omitted tail term is below tol.
double zeta(double alpha, double tol = 1e-14);

struct Thm1Bounds {
  double general = 0.0;
  std::optional<double> simple;  // only for alpha > 2
  // 1 - r_max (zeta(alpha) - 1) / sigma1^2 < 0: general is reported as 0.
  bool vacuous = false;
  // sigma1^2 < r_max; the lower bound's derivation assumes the opposite.
  bool precondition_violated = false;
};

// Lower bounds on cos(r, q1) under an exact Zipf law with shape alpha:
//   general = sigma1^2 / (r_max sqrt(zeta(2a))) * sqrt(1 - r_max (zeta(a) - 1) / sigma1^2)
//   simple  = sqrt((2 - zeta(a)) / zeta(2a))
// General is clamped to [0, 1].
Thm1Bounds thm1_bounds(double sigma1_sq, double r_max, double alpha);

// Lower bound on the fraction of users whose top-1 item is the most popular
// one: phi(x) / n with phi(x) = #{u : p1[u] > x} and
//   x = sqrt(2 zeta(2a)) / (1 - 2^-a) * (sum_k sigma_k / sigma1 - 1).
struct Thm2Bound {
  double x = 0.0;
  double bound = 0.0;
};

Thm2Bound thm2_bound(const Eigen::VectorXd& singular_values, const Eigen::VectorXd& p1, double alpha);

// Fraction of users for whom item argmax(r) scores strictly above every other
// item. Ties count as losses.
double observed_top1_ratio(const Embeddings& e, const PopularityVector& r);

// sigma(t) = s e^{2st} / (e^{2st} - 1 + s / sigma0), evaluated as
// s / (1 + (s / sigma0 - 1) e^{-2st}) so large t cannot overflow.
double sv_trajectory(double s, double sigma0, double t);

inline constexpr double kThm2AlignmentPremise = 0.95;

struct BoundReport {
  double alpha = 0.0;
  double alpha_r_squared = 0.0;
  // False when the fitted shape is <= 1 and the zeta series diverges; every
  // bound field is then left at zero and reported not applicable.
  bool applicable = true;
  double zeta_alpha = 0.0;
  double zeta_2alpha = 0.0;
  double sigma1 = 0.0;
  double r_max = 0.0;
  double thm1_general = 0.0;
  std::optional<double> thm1_simple;
  bool thm1_vacuous = false;
  bool thm1_precondition_violated = false;
  double observed_cos = 0.0;
  double thm2_x = 0.0;
  double thm2_bound = 0.0;
  bool thm2_vacuous = false;
  // cos(r, q1) >= 0.95; below that the top-1 bound's alignment premise fails.
  bool thm2_applicable = false;
  double observed_eta = 0.0;
  bool thm1_general_satisfied = false;
  std::optional<bool> thm1_simple_satisfied;
  std::optional<bool> thm2_satisfied;
};

BoundReport bound_report(const Embeddings& e, const InteractionMatrix& train);

}  // namespace sbl

#endif  // SBL_THEORY_HPP
