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

#ifndef SBL_LOSS_HPP
#define SBL_LOSS_HPP

#include <string>
#include <vector>

#include "sbl/embedding.hpp"
#include "sbl/interactions.hpp"

namespace sbl {

enum class LossKind { mse, bce, bpr };

std::string to_string(LossKind kind);
LossKind parse_loss(const std::string& name);

// Clamp applied to sigmoid outputs before taking logs.
inline constexpr double kLogClamp = 1e-12;

struct PointSample {
  Index user;
  Index item;
  double label;  // 1 for observed, 0 for sampled negatives
};

struct TripleSample {
  Index user;
  Index positive;
  Index negative;
};

// Pointwise losses read `points`, BPR reads `triples`.
struct Batch {
  std::vector<PointSample> points;
  std::vector<TripleSample> triples;

  bool empty() const { return points.empty() && triples.empty(); }
};

struct LossGrad {
  double loss = 0.0;
  RowMatrix<double> grad_users;
  RowMatrix<double> grad_items;
};

// Summed loss over the batch:
//   mse: sum (y - s)^2
//   bce: -sum [y log sig(s) + (1 - y) log(1 - sig(s))]
//   bpr: -sum log sig(s_pos - s_neg)
// with s = <u_u, v_i>. Gradients are added into grad_users / grad_items, which
// must already have the embedding shapes.
double accumulate_loss_grad(const Embeddings& e, const Batch& batch, LossKind kind,
                            RowMatrix<double>& grad_users, RowMatrix<double>& grad_items);

LossGrad loss_and_grad(const Embeddings& e, const Batch& batch, LossKind kind);

// ||Y - U V^T||_F^2 over the whole matrix and its gradient, evaluated through
// the d x d Gram matrices and the sparse pattern of Y in O((nnz + (n + m) d) d).
double accumulate_full_mse(const Embeddings& e, const InteractionMatrix& y,
                           RowMatrix<double>& grad_users, RowMatrix<double>& grad_items);

}  // namespace sbl

#endif  // SBL_LOSS_HPP
