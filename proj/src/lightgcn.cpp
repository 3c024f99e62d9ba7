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

#include "sbl/lightgcn.hpp"

#include <cmath>

namespace sbl {

Embeddings lightgcn_propagate(const InteractionMatrix& y, const Embeddings& base, int layers) {
  if (layers < 0) throw Error(ErrorKind::config, "layer count must be non-negative");
  if (y.n_users() != base.n_users() || y.n_items() != base.n_items()) {
    throw Error(ErrorKind::config, "interaction matrix and embeddings disagree in shape");
  }
  Eigen::VectorXd user_scale(y.n_users()), item_scale(y.n_items());
  for (Index u = 0; u < y.n_users(); ++u) {
    const auto deg = y.user_degree(u);
    user_scale[u] = deg > 0 ? 1.0 / std::sqrt(static_cast<double>(deg)) : 0.0;
  }
  for (Index i = 0; i < y.n_items(); ++i) {
    const auto deg = y.item_degree(i);
    item_scale[i] = deg > 0 ? 1.0 / std::sqrt(static_cast<double>(deg)) : 0.0;
  }

  Embeddings sum = base;
  Embeddings layer = base;
  Embeddings next(RowMatrix<double>(base.n_users(), base.dim()), RowMatrix<double>(base.n_items(), base.dim()));
  for (int l = 0; l < layers; ++l) {
    for (Index u = 0; u < y.n_users(); ++u) {
      if (y.user_degree(u) == 0) {
        next.users.row(u) = layer.users.row(u);
        continue;
      }
      next.users.row(u).setZero();
      for (Index i : y.items_of(u)) next.users.row(u) += item_scale[i] * layer.items.row(i);
      next.users.row(u) *= user_scale[u];
    }
    for (Index i = 0; i < y.n_items(); ++i) {
      if (y.item_degree(i) == 0) {
        next.items.row(i) = layer.items.row(i);
        continue;
      }
      next.items.row(i).setZero();
      for (Index u : y.users_of(i)) next.items.row(i) += user_scale[u] * layer.users.row(u);
      next.items.row(i) *= item_scale[i];
    }
    std::swap(layer, next);
    sum.users += layer.users;
    sum.items += layer.items;
  }
  const double inv = 1.0 / static_cast<double>(layers + 1);
  sum.users *= inv;
  sum.items *= inv;
  return sum;
}

}  // namespace sbl
