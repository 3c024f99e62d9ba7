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

#ifndef SBL_RESN_HPP
#define SBL_RESN_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "sbl/embedding.hpp"
#include "sbl/error.hpp"
#include "sbl/random.hpp"
#include "sbl/spectral.hpp"

namespace sbl {

// Surrogate for ||U V^T||_2^2: the Rayleigh quotient of (U V^T)^T (U V^T) at
// the unit vector q = V U^T e / ||V U^T e||, e the all-ones user vector,
//   penalty = ||U V^T V U^T e||^2 / ||V U^T e||^2.
// Everything is evaluated right to left through d-, m- and n-vectors.

inline constexpr double kDegenerateDenominator = 1e-30;

template <typename Scalar>
struct ResnPenaltyValue {
  Scalar value = 0;
  Scalar numerator = 0;
  Scalar denominator = 0;
  // Denominator below 1e-30: value is 0 and no gradient is produced.
  bool degenerate = false;
};

namespace detail {

template <typename Scalar>
struct ResnForward {
  Vector<Scalar> a;  // U^T e, d
  Vector<Scalar> b;  // V a, m
  Vector<Scalar> c;  // V^T b, d
  Vector<Scalar> f;  // U c, n
  ResnPenaltyValue<Scalar> value;
};

template <typename Scalar>
ResnForward<Scalar> resn_forward(const EmbeddingPair<Scalar>& e) {
  ResnForward<Scalar> fw;
  fw.a = e.users.colwise().sum().transpose();
  fw.b = e.items * fw.a;
  fw.c = e.items.transpose() * fw.b;
  fw.f = e.users * fw.c;
  fw.value.numerator = fw.f.squaredNorm();
  fw.value.denominator = fw.b.squaredNorm();
  if (!(fw.value.denominator >= Scalar(kDegenerateDenominator))) {
    fw.value.degenerate = true;
    fw.value.value = 0;
  } else {
    fw.value.value = fw.value.numerator / fw.value.denominator;
  }
  return fw;
}

}  // namespace detail

template <typename Scalar>
ResnPenaltyValue<Scalar> resn_penalty(const EmbeddingPair<Scalar>& e) {
  return detail::resn_forward(e).value;
}

// Adds scale * d(penalty)/dU and scale * d(penalty)/dV into the given
// buffers. With N = ||f||^2, D = ||b||^2 and P = N / D the quotient rule
// collapses to
//   dP/dU = (2 f c^T + e (V^T h)^T) / D
//   dP/dV = (b g^T + h a^T) / D
// where g = 2 U^T f and h = V g - 2 P b. Cost O((n + m) d).
template <typename Scalar>
ResnPenaltyValue<Scalar> accumulate_resn_gradient(const EmbeddingPair<Scalar>& e, Scalar scale,
                                                  RowMatrix<Scalar>& grad_users, RowMatrix<Scalar>& grad_items) {
  const auto fw = detail::resn_forward(e);
  if (fw.value.degenerate || scale == Scalar(0)) return fw.value;
  const Scalar w = scale / fw.value.denominator;
  const Vector<Scalar> g = Scalar(2) * (e.users.transpose() * fw.f);
  const Vector<Scalar> h = e.items * g - Scalar(2) * fw.value.value * fw.b;
  const Vector<Scalar> vth = e.items.transpose() * h;
  grad_users.noalias() += (Scalar(2) * w * fw.f) * fw.c.transpose();
  grad_users.rowwise() += w * vth.transpose();
  grad_items.noalias() += (w * fw.b) * g.transpose();
  grad_items.noalias() += (w * h) * fw.a.transpose();
  return fw.value;
}

template <typename Scalar>
struct ResnGradient {
  ResnPenaltyValue<Scalar> penalty;
  RowMatrix<Scalar> grad_users;
  RowMatrix<Scalar> grad_items;
};

template <typename Scalar>
ResnGradient<Scalar> resn_gradient(const EmbeddingPair<Scalar>& e) {
  ResnGradient<Scalar> out;
  out.grad_users = RowMatrix<Scalar>::Zero(e.n_users(), e.dim());
  out.grad_items = RowMatrix<Scalar>::Zero(e.n_items(), e.dim());
  out.penalty = accumulate_resn_gradient(e, Scalar(1), out.grad_users, out.grad_items);
  return out;
}

template <typename Scalar>
struct SpectralNormEstimate {
  Scalar sigma1 = 0;
  Index iterations = 0;
  bool converged = false;
};

// sigma1(U V^T) by power iteration on (V^T V)(U^T U), whose top eigenvalue is
// sigma1^2. Converged once successive Rayleigh quotients differ relatively by
// less than tol; otherwise the last estimate comes back unflagged.
template <typename Scalar>
SpectralNormEstimate<Scalar> spectral_norm_exact(const EmbeddingPair<Scalar>& e, Scalar tol = Scalar(1e-14),
                                                 Index max_iters = 100000) {
  using std::sqrt;
  if (!(tol > Scalar(0))) throw Error(ErrorKind::config, "tolerance must be positive");
  const Matrix<Scalar> gu = gram(e.users);
  const Matrix<Scalar> gv = gram(e.items);
  auto rayleigh = [&](const Vector<Scalar>& w) {
    const Vector<Scalar> z = gu * w;
    const Vector<Scalar> gz = gv * z;
    const Scalar denom = z.dot(gz);
    return denom > Scalar(0) ? gz.dot(gu * gz) / denom : Scalar(0);
  };
  SpectralNormEstimate<Scalar> out;
  Vector<Scalar> w = detail::start_vector<Scalar>(e.dim());
  Scalar lambda = rayleigh(w);
  for (Index it = 1; it <= max_iters; ++it) {
    Vector<Scalar> next = gv * (gu * w);
    const Scalar nrm = next.norm();
    out.iterations = it;
    if (!(nrm > Scalar(0))) {
      lambda = 0;
      out.converged = true;
      break;
    }
    w = next / nrm;
    const Scalar lambda_next = rayleigh(w);
    const bool done = std::abs(lambda_next - lambda) <= tol * std::abs(lambda_next);
    lambda = lambda_next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.sigma1 = sqrt(std::max(lambda, Scalar(0)));
  return out;
}

// The same quantity from an explicitly materialised score matrix, iterating
// q <- Y^T Y q on the m-dimensional space. This is the brute-force route and
// is only meant for the direct baseline and for cross-checks.
template <typename Scalar>
SpectralNormEstimate<Scalar> spectral_norm_dense(const Matrix<Scalar>& scores, Vector<Scalar>* q_out = nullptr,
                                                 Scalar tol = Scalar(1e-14), Index max_iters = 100000) {
  using std::sqrt;
  if (!(tol > Scalar(0))) throw Error(ErrorKind::config, "tolerance must be positive");
  const Index m = scores.cols();
  Vector<Scalar> q(m);
  auto rng = make_stream(0x5eed, "dense-power-iteration");
  for (Index k = 0; k < m; ++k) q[k] = Scalar(1) + Scalar(0.5 * uniform01(rng));
  q /= q.norm();
  SpectralNormEstimate<Scalar> out;
  Vector<Scalar> yq = scores * q;
  Scalar lambda = yq.squaredNorm();
  for (Index it = 1; it <= max_iters; ++it) {
    Vector<Scalar> next = scores.transpose() * yq;
    const Scalar nrm = next.norm();
    out.iterations = it;
    if (!(nrm > Scalar(0))) {
      lambda = 0;
      out.converged = true;
      break;
    }
    q = next / nrm;
    yq.noalias() = scores * q;
    const Scalar lambda_next = yq.squaredNorm();
    const bool done = std::abs(lambda_next - lambda) <= tol * std::abs(lambda_next);
    lambda = lambda_next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.sigma1 = sqrt(std::max(lambda, Scalar(0)));
  if (q_out != nullptr) *q_out = std::move(q);
  return out;
}

// Direct baseline: materialise U V^T, find its top right vector q by dense
// power iteration and add scale * grad of ||U V^T q||^2 with q held fixed,
//   dU = 2 (Y q)(V^T q)^T,  dV = 2 q (U^T Y q)^T.
// Returns sigma1^2. Cost O(n m d + iterations * n m) per call; the iteration
// stops at max_iters even if not converged.
template <typename Scalar>
Scalar accumulate_direct_gradient(const EmbeddingPair<Scalar>& e, Scalar scale, RowMatrix<Scalar>& grad_users,
                                  RowMatrix<Scalar>& grad_items, Scalar tol = Scalar(1e-10),
                                  Index max_iters = 1000) {
  const Matrix<Scalar> scores = e.dense_scores();
  Vector<Scalar> q;
  const auto est = spectral_norm_dense<Scalar>(scores, &q, tol, max_iters);
  const Vector<Scalar> yq = scores * q;
  const Vector<Scalar> vq = e.items.transpose() * q;
  const Vector<Scalar> uyq = e.users.transpose() * yq;
  grad_users.noalias() += (Scalar(2) * scale * yq) * vq.transpose();
  grad_items.noalias() += (Scalar(2) * scale * q) * uyq.transpose();
  return est.sigma1 * est.sigma1;
}

template <typename Scalar>
struct EstimateComparison {
  Scalar exact = 0;
  Scalar estimate = 0;
  Scalar relative_gap = 0;
  // sigma2 <= 1e-6 sigma1, about the resolution of the Gram-based spectrum:
  // the surrogate is exact.
  bool rank1_exact = false;
};

// Surrogate against the power-iteration value of ||U V^T||_2^2. The surrogate
// is a Rayleigh quotient, so it can only undershoot; when both agree to
// roundoff the exact side is taken as the larger of the two and the gap
// clamps at zero.
template <typename Scalar>
EstimateComparison<Scalar> compare_estimates(const EmbeddingPair<Scalar>& e) {
  const auto pen = resn_penalty(e);
  if (pen.degenerate) throw Error(ErrorKind::degenerate, "surrogate direction V U^T e is zero");
  const auto norm = spectral_norm_exact(e);
  EstimateComparison<Scalar> out;
  out.estimate = pen.value;
  out.exact = std::max(norm.sigma1 * norm.sigma1, pen.value);
  const auto sv = all_singular_values(e);
  out.rank1_exact = sv.size() < 2 || sv[1] <= Scalar(1e-6) * sv[0];
  // At rank 1 the surrogate is exact; any remaining difference is rounding.
  if (out.rank1_exact) {
    out.exact = out.estimate;
    out.relative_gap = Scalar(0);
  } else {
    out.relative_gap = out.exact > Scalar(0) ? std::max(Scalar(0), (out.exact - out.estimate) / out.exact) : Scalar(0);
  }
  return out;
}

// Diagnostic ||Y r||^2 / ||r||^2 on the materialised score matrix, r the
// item popularity. Same n * m cap as the dense post-activation spectrum.
template <typename Scalar>
Scalar popularity_rayleigh_dense(const EmbeddingPair<Scalar>& e, const Vector<Scalar>& popularity) {
  if (e.n_users() * e.n_items() > kDenseSpectrumMaxEntries) {
    throw Error(ErrorKind::size_limit, "dense popularity quotient is limited to n*m <= 40000");
  }
  if (popularity.size() != e.n_items()) throw Error(ErrorKind::config, "popularity length differs from item count");
  const Scalar rr = popularity.squaredNorm();
  if (!(rr > Scalar(0))) throw Error(ErrorKind::insufficient_data, "popularity vector is zero");
  return (e.dense_scores() * popularity).squaredNorm() / rr;
}

}  // namespace sbl

#endif  // SBL_RESN_HPP
