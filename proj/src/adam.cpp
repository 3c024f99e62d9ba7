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

#include "sbl/adam.hpp"

#include <cmath>
#include <sstream>

namespace sbl {

namespace {

void update_block(RowMatrix<double>& theta, RowMatrix<double>& m, RowMatrix<double>& v,
                  const RowMatrix<double>& g, double lr, double decay, double c1, double c2,
                  const AdamHyper& hyper) {
  theta *= decay;
  m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
  v = hyper.beta2 * v + (1.0 - hyper.beta2) * g.cwiseAbs2();
  theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + hyper.epsilon);
}

}  // namespace

void adam_step(Embeddings& e, AdamState& state, const RowMatrix<double>& grad_users,
               const RowMatrix<double>& grad_items, double learning_rate, double weight_decay,
               const AdamHyper& hyper) {
  if (state.m_users.rows() != e.n_users() || state.m_items.rows() != e.n_items() ||
      state.m_users.cols() != e.dim() || grad_users.rows() != e.n_users() ||
      grad_items.rows() != e.n_items()) {
    throw Error(ErrorKind::config, "Adam buffers do not match the embedding shapes");
  }
  if (!grad_users.allFinite() || !grad_items.allFinite()) {
    const double max_abs = std::max(grad_users.cwiseAbs().maxCoeff(), grad_items.cwiseAbs().maxCoeff());
    std::ostringstream msg;
    msg << "non-finite gradient at Adam step " << state.step + 1 << " (max |grad| = " << max_abs << ")";
    throw Error(ErrorKind::divergence, msg.str());
  }
  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  const double decay = 1.0 - learning_rate * weight_decay;
  update_block(e.users, state.m_users, state.v_users, grad_users, learning_rate, decay, c1, c2, hyper);
  update_block(e.items, state.m_items, state.v_items, grad_items, learning_rate, decay, c1, c2, hyper);
}

}  // namespace sbl
