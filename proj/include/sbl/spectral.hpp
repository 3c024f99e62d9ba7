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

#ifndef SBL_SPECTRAL_HPP
#define SBL_SPECTRAL_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sbl/embedding.hpp"
#include "sbl/error.hpp"
#include "sbl/jacobi.hpp"
#include "sbl/random.hpp"

namespace sbl {

// Everything here works on the d x d Gram matrices U^T U and V^T V; the n x m
// score matrix is only formed by the dense helpers at the bottom, which are
// size capped.

template <typename Scalar>
struct SingularTriplet {
  Scalar sigma1 = 0;
  Vector<Scalar> p1;  // left, length n
  Vector<Scalar> q1;  // right, length m
  Index iterations = 0;
  bool converged = false;
  // |sigma1 - sigma2| / sigma1 < 1e-6: q1 is then only one unit vector of
  // the top singular subspace.
  bool degenerate = false;
};

template <typename Scalar>
struct SpectralReport {
  Scalar sigma1 = 0;
  Vector<Scalar> q1;
  Vector<Scalar> p1;
  Scalar frobenius_sq = 0;
  Scalar principal_ratio = 0;
  Scalar cos_r_q1 = 0;
  Vector<Scalar> singular_values;
};

inline constexpr double kDegenerateGap = 1e-6;

template <typename Scalar>
Matrix<Scalar> gram(const RowMatrix<Scalar>& x) {
  return x.transpose() * x;
}

// Singular values of U V^T: square roots of the eigenvalues of
// Gu^1/2 Gv Gu^1/2 (same spectrum as Gu Gv), roundoff negatives clamped to
// zero. Length min(d, n, m), descending.
template <typename Scalar>
Vector<Scalar> all_singular_values(const EmbeddingPair<Scalar>& e) {
  using std::sqrt;
  const Matrix<Scalar> gu = gram(e.users);
  const Matrix<Scalar> gv = gram(e.items);
  const auto gu_eig = jacobi_eigen<Scalar>(gu);
  Vector<Scalar> root = gu_eig.values.cwiseMax(Scalar(0)).cwiseSqrt();
  const Matrix<Scalar> gu_sqrt = gu_eig.vectors * root.asDiagonal() * gu_eig.vectors.transpose();
  const Matrix<Scalar> sym = gu_sqrt * gv * gu_sqrt;
  const auto eig = jacobi_eigen<Scalar>(sym);
  const Index count = std::min({e.dim(), e.n_users(), e.n_items()});
  Vector<Scalar> out(count);
  for (Index k = 0; k < count; ++k) out[k] = sqrt(std::max(eig.values[k], Scalar(0)));
  return out;
}

// sum_k sigma_k^2 = ||U V^T||_F^2 = tr(Gu Gv).
template <typename Scalar>
Scalar frobenius_sq(const EmbeddingPair<Scalar>& e) {
  return gram(e.users).cwiseProduct(gram(e.items)).sum();
}

namespace detail {

// Flip so that the largest-magnitude entry of q (first one on ties) is positive.
template <typename Scalar>
void fix_sign(Vector<Scalar>& q, Vector<Scalar>& p) {
  if (q.size() == 0) return;
  Index best = 0;
  for (Index k = 1; k < q.size(); ++k) {
    if (std::abs(q[k]) > std::abs(q[best])) best = k;
  }
  if (q[best] < Scalar(0)) {
    q = -q;
    p = -p;
  }
}

template <typename Scalar>
Vector<Scalar> start_vector(Index d) {
  auto rng = make_stream(0x5eed, "power-iteration");
  Vector<Scalar> w(d);
  for (Index k = 0; k < d; ++k) w[k] = Scalar(1) + Scalar(0.5 * uniform01(rng));
  return w / w.norm();
}

}  // namespace detail

// Power iteration w <- (V^T V)(U^T U) w in the d-dimensional space. With
// z = (U^T U) w, the right vector is q1 = V z / ||V z|| and sigma1^2 is the
// Rayleigh quotient ||U V^T q1||^2, evaluated through the Gram matrices.
// Stops when both the relative change of that quotient and the relative
// eigen-residual of w fall below tol.
template <typename Scalar>
SingularTriplet<Scalar> top_singular_triplet(const EmbeddingPair<Scalar>& e, Scalar tol = Scalar(1e-12),
                                             Index max_iters = 200000) {
  using std::sqrt;
  const Matrix<Scalar> gu = gram(e.users);
  const Matrix<Scalar> gv = gram(e.items);
  const Matrix<Scalar> g = gv * gu;
  const Scalar residual_tol = std::max(tol, Scalar(1e3) * std::numeric_limits<Scalar>::epsilon());

  auto rayleigh = [&](const Vector<Scalar>& w) {
    const Vector<Scalar> z = gu * w;
    const Scalar denom = z.dot(gv * z);
    const Vector<Scalar> gz = gv * z;
    return denom > Scalar(0) ? gz.dot(gu * gz) / denom : Scalar(0);
  };

  SingularTriplet<Scalar> out;
  Vector<Scalar> w = detail::start_vector<Scalar>(e.dim());
  Scalar lambda = rayleigh(w);
  for (Index it = 1; it <= max_iters; ++it) {
    Vector<Scalar> next = g * w;
    const Scalar nrm = next.norm();
    if (!(nrm > Scalar(0))) throw Error(ErrorKind::degenerate, "score matrix is zero");
    next /= nrm;
    const Scalar lambda_next = rayleigh(next);
    const Scalar residual = (g * next - lambda_next * next).norm() / lambda_next;
    const Scalar change = std::abs(lambda_next - lambda) / lambda_next;
    w = next;
    lambda = lambda_next;
    out.iterations = it;
    if (change <= tol && residual <= residual_tol) {
      out.converged = true;
      break;
    }
  }

  const Vector<Scalar> z = gu * w;
  Vector<Scalar> q = e.items * z;
  const Scalar qn = q.norm();
  if (!(qn > Scalar(0))) throw Error(ErrorKind::degenerate, "score matrix is zero");
  q /= qn;
  Vector<Scalar> p = e.users * (e.items.transpose() * q);
  out.sigma1 = p.norm();
  if (!(out.sigma1 > Scalar(0))) throw Error(ErrorKind::degenerate, "score matrix is zero");
  p /= out.sigma1;
  detail::fix_sign(q, p);
  out.q1 = std::move(q);
  out.p1 = std::move(p);

  const auto sv = all_singular_values(e);
  out.degenerate = sv.size() > 1 && sv[0] > Scalar(0) && (sv[0] - sv[1]) / sv[0] < Scalar(kDegenerateGap);
  return out;
}

// r . q1 / ||r||  (q1 is unit).
template <typename Scalar>
Scalar cos_alignment(const Vector<Scalar>& r, const Vector<Scalar>& q1) {
  if (r.size() != q1.size()) throw Error(ErrorKind::config, "popularity and singular vector lengths differ");
  const Scalar nrm = r.norm();
  if (!(nrm > Scalar(0))) throw Error(ErrorKind::insufficient_data, "popularity vector is zero");
  return r.dot(q1) / nrm;
}

template <typename Scalar>
SpectralReport<Scalar> spectral_report(const EmbeddingPair<Scalar>& e, const Vector<Scalar>& popularity,
                                       Scalar tol = Scalar(1e-12)) {
  const auto triplet = top_singular_triplet(e, tol);
  SpectralReport<Scalar> rep;
  rep.sigma1 = triplet.sigma1;
  rep.q1 = triplet.q1;
  rep.p1 = triplet.p1;
  rep.frobenius_sq = frobenius_sq(e);
  rep.principal_ratio = rep.sigma1 * rep.sigma1 / rep.frobenius_sq;
  rep.cos_r_q1 = cos_alignment(popularity, rep.q1);
  rep.singular_values = all_singular_values(e);
  return rep;
}

inline constexpr Index kOracleMaxDim = 200;
inline constexpr Index kDenseSpectrumMaxEntries = 40000;

// From-scratch one-sided Jacobi SVD, used to check the implicit paths. Refuses
// matrices with a side longer than 200.
template <typename Scalar>
DenseSvd<Scalar> dense_svd_oracle(const Matrix<Scalar>& m) {
  if (m.rows() > kOracleMaxDim || m.cols() > kOracleMaxDim) {
    throw Error(ErrorKind::size_limit, "dense SVD oracle is limited to 200 x 200 matrices");
  }
  return detail::jacobi_svd<Scalar>(m);
}

// Materialises mu(U V^T) (n * m <= 40000) and reads the report off its full
// SVD. With the identity activation the spectrum is truncated to rank d so the
// result lines up with spectral_report.
template <typename Scalar>
SpectralReport<Scalar> dense_postactivation_spectrum(const EmbeddingPair<Scalar>& e,
                                                     const Vector<Scalar>& popularity,
                                                     Activation activation = Activation::sigmoid) {
  if (e.n_users() * e.n_items() > kDenseSpectrumMaxEntries) {
    throw Error(ErrorKind::size_limit,
                "dense post-activation spectrum is limited to n*m <= 40000; use the pre-activation report");
  }
  Matrix<Scalar> scores = e.dense_scores();
  if (activation == Activation::sigmoid) {
    scores = scores.unaryExpr([](Scalar x) { return Scalar(sigmoid(static_cast<double>(x))); });
  }
  const auto svd = detail::jacobi_svd<Scalar>(scores);
  SpectralReport<Scalar> rep;
  Vector<Scalar> q = svd.right.col(0);
  Vector<Scalar> p = svd.left.col(0);
  detail::fix_sign(q, p);
  rep.sigma1 = svd.values[0];
  rep.q1 = std::move(q);
  rep.p1 = std::move(p);
  rep.frobenius_sq = scores.squaredNorm();
  rep.principal_ratio = rep.sigma1 * rep.sigma1 / rep.frobenius_sq;
  rep.cos_r_q1 = cos_alignment(popularity, rep.q1);
  const Index count = activation == Activation::identity ? std::min<Index>(e.dim(), svd.values.size())
                                                         : svd.values.size();
  rep.singular_values = svd.values.head(count);
  return rep;
}

}  // namespace sbl

#endif  // SBL_SPECTRAL_HPP
