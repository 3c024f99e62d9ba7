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

#ifndef SBL_TESTS_TEST_UTIL_HPP
#define SBL_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "sbl/embedding.hpp"
#include "sbl/random.hpp"

namespace sbl::testing {

// Entries uniform on [-scale, scale].
inline Embeddings random_embeddings(Index n, Index m, Index d, std::uint64_t seed, double scale = 1.0) {
  auto rng = make_stream(seed, "test-embeddings");
  RowMatrix<double> u(n, d), v(m, d);
  for (Index k = 0; k < u.size(); ++k) u.data()[k] = scale * (2.0 * uniform01(rng) - 1.0);
  for (Index k = 0; k < v.size(); ++k) v.data()[k] = scale * (2.0 * uniform01(rng) - 1.0);
  return {std::move(u), std::move(v)};
}

inline Eigen::MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed) {
  auto rng = make_stream(seed, "test-matrix");
  Eigen::MatrixXd m(rows, cols);
  for (Index k = 0; k < m.size(); ++k) m.data()[k] = 2.0 * uniform01(rng) - 1.0;
  return m;
}

struct FdGradient {
  RowMatrix<double> users;
  RowMatrix<double> items;
};

// Central differences of f at e, step h.
inline FdGradient central_difference(const Embeddings& e, const std::function<double(const Embeddings&)>& f,
                                     double h = 1e-6) {
  FdGradient g{RowMatrix<double>::Zero(e.n_users(), e.dim()), RowMatrix<double>::Zero(e.n_items(), e.dim())};
  Embeddings probe = e;
  for (Index k = 0; k < e.users.size(); ++k) {
    const double x = probe.users.data()[k];
    probe.users.data()[k] = x + h;
    const double up = f(probe);
    probe.users.data()[k] = x - h;
    const double down = f(probe);
    probe.users.data()[k] = x;
    g.users.data()[k] = (up - down) / (2 * h);
  }
  for (Index k = 0; k < e.items.size(); ++k) {
    const double x = probe.items.data()[k];
    probe.items.data()[k] = x + h;
    const double up = f(probe);
    probe.items.data()[k] = x - h;
    const double down = f(probe);
    probe.items.data()[k] = x;
    g.items.data()[k] = (up - down) / (2 * h);
  }
  return g;
}

// max |a - b| / max(max |b|, floor): relative to the gradient's scale so that
// near-zero entries do not blow the ratio up.
inline double relative_error(const RowMatrix<double>& a, const RowMatrix<double>& b, double floor = 1e-8) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), floor);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace sbl::testing

#endif  // SBL_TESTS_TEST_UTIL_HPP
