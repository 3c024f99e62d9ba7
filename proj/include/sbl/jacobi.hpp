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

#ifndef SBL_JACOBI_HPP
#define SBL_JACOBI_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace sbl {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                 // descending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;   // columns
  int sweeps = 0;
};

// Cyclic two-sided Jacobi for a small symmetric matrix. Only the upper
// triangle is trusted; the result is sorted by eigenvalue, largest first.
template <typename Scalar>
SymmetricEigen<Scalar> jacobi_eigen(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                    int max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = a.rows();
  a.template triangularView<Eigen::StrictlyLower>() = a.transpose();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    Scalar off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == Scalar(0)) break;

    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (abs(apq) <= eps * sqrt(abs(a(p, p) * a(q, q))) || apq == Scalar(0)) continue;
        rotated = true;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

// Thin SVD  M = left * diag(values) * right^T  with values descending.
template <typename Scalar>
struct DenseSvd {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> left;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> right;
  int sweeps = 0;
};

namespace detail {

// Hestenes one-sided Jacobi: orthogonalise the columns of a tall matrix by
// plane rotations, accumulating the rotations into the right factor.
template <typename Scalar>
DenseSvd<Scalar> one_sided_jacobi_tall(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                       int max_sweeps) {
  using std::abs;
  using std::sqrt;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Mat v = Mat::Identity(cols, cols);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < cols; ++i) {
      for (Eigen::Index j = i + 1; j < cols; ++j) {
        const Scalar alpha = a.col(i).squaredNorm();
        const Scalar beta = a.col(j).squaredNorm();
        const Scalar gamma = a.col(i).dot(a.col(j));
        if (gamma == Scalar(0) || abs(gamma) <= eps * sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(zeta) + sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Eigen::Index k = 0; k < rows; ++k) {
          const Scalar x = a(k, i), y = a(k, j);
          a(k, i) = c * x - s * y;
          a(k, j) = s * x + c * y;
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
          const Scalar x = v(k, i), y = v(k, j);
          v(k, i) = c * x - s * y;
          v(k, j) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms(cols);
  for (Eigen::Index k = 0; k < cols; ++k) norms[k] = a.col(k).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return norms[x] > norms[y]; });

  DenseSvd<Scalar> out;
  out.sweeps = sweep;
  out.values.resize(cols);
  out.left.resize(rows, cols);
  out.right.resize(cols, cols);
  const Scalar floor = cols > 0 ? norms[order[0]] * eps : Scalar(0);
  std::vector<Eigen::Index> null_columns;
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Eigen::Index src = order[k];
    out.values[k] = norms[src];
    out.right.col(k) = v.col(src);
    if (norms[src] > floor && norms[src] > Scalar(0)) {
      out.left.col(k) = a.col(src) / norms[src];
    } else {
      null_columns.push_back(k);
    }
  }
  // Columns with (numerically) zero singular value carry no direction; fill
  // them with an orthonormal completion so left^T left = I still holds.
  Eigen::Index candidate = 0;
  for (Eigen::Index k : null_columns) {
    for (; candidate < rows; ++candidate) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Unit(rows, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          const bool filled = j < k || std::find(null_columns.begin(), null_columns.end(), j) == null_columns.end();
          if (j == k || !filled) continue;
          e -= out.left.col(j).dot(e) * out.left.col(j);
        }
      }
      const Scalar nrm = e.norm();
      if (nrm > Scalar(0.5)) {
        out.left.col(k) = e / nrm;
        ++candidate;
        break;
      }
    }
  }
  return out;
}

template <typename Scalar>
DenseSvd<Scalar> jacobi_svd(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, int max_sweeps = 100) {
  if (m.rows() >= m.cols()) return one_sided_jacobi_tall<Scalar>(m, max_sweeps);
  auto t = one_sided_jacobi_tall<Scalar>(m.transpose(), max_sweeps);
  std::swap(t.left, t.right);
  return t;
}

}  // namespace detail

}  // namespace sbl

#endif  // SBL_JACOBI_HPP
