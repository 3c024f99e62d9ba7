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

#ifndef SBL_ADAM_HPP
#define SBL_ADAM_HPP

#include <cstdint>

#include "sbl/embedding.hpp"

namespace sbl {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment buffers shaped like the embeddings.
struct AdamState {
  RowMatrix<double> m_users, v_users;
  RowMatrix<double> m_items, v_items;
  std::int64_t step = 0;

  AdamState() = default;
  explicit AdamState(const Embeddings& e)
      : m_users(RowMatrix<double>::Zero(e.n_users(), e.dim())),
        v_users(RowMatrix<double>::Zero(e.n_users(), e.dim())),
        m_items(RowMatrix<double>::Zero(e.n_items(), e.dim())),
        v_items(RowMatrix<double>::Zero(e.n_items(), e.dim())) {}
};

// Bias-corrected Adam over every parameter with decoupled weight decay
// (theta <- theta - lr * wd * theta, then the Adam update). Throws a
// divergence error, leaving the parameters untouched, if any gradient entry
// is not finite.
void adam_step(Embeddings& e, AdamState& state, const RowMatrix<double>& grad_users,
               const RowMatrix<double>& grad_items, double learning_rate, double weight_decay,
               const AdamHyper& hyper = {});

}  // namespace sbl

#endif  // SBL_ADAM_HPP
