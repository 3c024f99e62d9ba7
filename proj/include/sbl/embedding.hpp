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

#ifndef SBL_EMBEDDING_HPP
#define SBL_EMBEDDING_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sbl/error.hpp"
#include "sbl/interactions.hpp"
#include "sbl/random.hpp"

namespace sbl {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Model state: one row per user and per item. The pre-activation score matrix
// is users * items^T and is never formed outside the explicitly capped dense
// helpers.
template <typename Scalar>
struct EmbeddingPair {
  RowMatrix<Scalar> users;  // n x d
  RowMatrix<Scalar> items;  // m x d

  EmbeddingPair() = default;
  EmbeddingPair(RowMatrix<Scalar> u, RowMatrix<Scalar> v) : users(std::move(u)), items(std::move(v)) {
    if (users.cols() != items.cols()) throw Error(ErrorKind::config, "user and item embeddings differ in dimension");
  }

  Index n_users() const { return users.rows(); }
  Index n_items() const { return items.rows(); }
  Index dim() const { return users.cols(); }

  bool all_finite() const { return users.allFinite() && items.allFinite(); }

  // Materialises users * items^T; callers are responsible for size caps.
  Matrix<Scalar> dense_scores() const { return users * items.transpose(); }
};

using Embeddings = EmbeddingPair<double>;

template <typename Scalar>
EmbeddingPair<Scalar> operator*(Scalar t, const EmbeddingPair<Scalar>& e) {
  return {RowMatrix<Scalar>(t * e.users), RowMatrix<Scalar>(t * e.items)};
}

// Xavier-uniform with fan_in = fan_out = d: entries ~ U[-sqrt(3/d), sqrt(3/d)].
// `scale` multiplies the bound (1 is the standard initialisation).
Embeddings init_embeddings(Index n_users, Index n_items, Index dim, std::uint64_t seed, double scale = 1.0);

enum class Activation { identity, sigmoid };

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

Eigen::VectorXd predict_scores(const Embeddings& e, std::span<const Interaction> pairs,
                               Activation activation = Activation::identity);

// Binary checkpoint: "SBL1", then n, m, d as little-endian int64, then users
// and items as row-major little-endian float64.
void save_checkpoint(const std::filesystem::path& path, const Embeddings& e);
Embeddings load_checkpoint(const std::filesystem::path& path);

}  // namespace sbl

#endif  // SBL_EMBEDDING_HPP
