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

#include "sbl/loss.hpp"

#include <algorithm>
#include <cmath>

namespace sbl {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::mse: return "mse";
    case LossKind::bce: return "bce";
    case LossKind::bpr: return "bpr";
  }
  return "mse";
}

LossKind parse_loss(const std::string& name) {
  if (name == "mse") return LossKind::mse;
  if (name == "bce") return LossKind::bce;
  if (name == "bpr") return LossKind::bpr;
  throw Error(ErrorKind::config, "unknown loss '" + name + "'");
}

namespace {

double clamped_log_sigmoid(double x) {
  return std::log(std::clamp(sigmoid(x), kLogClamp, 1.0 - kLogClamp));
}

}  // namespace

double accumulate_loss_grad(const Embeddings& e, const Batch& batch, LossKind kind,
                            RowMatrix<double>& grad_users, RowMatrix<double>& grad_items) {
  double loss = 0.0;
  if (kind == LossKind::bpr) {
    for (const auto& t : batch.triples) {
      auto u = e.users.row(t.user);
      auto vp = e.items.row(t.positive);
      auto vn = e.items.row(t.negative);
      const double x = u.dot(vp) - u.dot(vn);
      loss -= clamped_log_sigmoid(x);
      // d/dx [-log sig(x)] = -(1 - sig(x)) = -sig(-x)
      const double g = -sigmoid(-x);
      grad_users.row(t.user) += g * (vp - vn);
      grad_items.row(t.positive) += g * u;
      grad_items.row(t.negative) -= g * u;
    }
    return loss;
  }
  for (const auto& p : batch.points) {
    auto u = e.users.row(p.user);
    auto v = e.items.row(p.item);
    const double s = u.dot(v);
    double g;
    if (kind == LossKind::mse) {
      const double r = p.label - s;
      loss += r * r;
      g = -2.0 * r;
    } else {
      loss -= p.label * clamped_log_sigmoid(s) + (1.0 - p.label) * clamped_log_sigmoid(-s);
      g = sigmoid(s) - p.label;
    }
    grad_users.row(p.user) += g * v;
    grad_items.row(p.item) += g * u;
  }
  return loss;
}

LossGrad loss_and_grad(const Embeddings& e, const Batch& batch, LossKind kind) {
  LossGrad out;
  out.grad_users = RowMatrix<double>::Zero(e.n_users(), e.dim());
  out.grad_items = RowMatrix<double>::Zero(e.n_items(), e.dim());
  out.loss = accumulate_loss_grad(e, batch, kind, out.grad_users, out.grad_items);
  return out;
}

double accumulate_full_mse(const Embeddings& e, const InteractionMatrix& y,
                           RowMatrix<double>& grad_users, RowMatrix<double>& grad_items) {
  const Eigen::MatrixXd gram_users = e.users.transpose() * e.users;
  const Eigen::MatrixXd gram_items = e.items.transpose() * e.items;

  // ||Y||^2 - 2 sum_{y_ui = 1} s_ui + tr(U^T U V^T V)
  double observed = 0.0;
  RowMatrix<double> y_items = RowMatrix<double>::Zero(e.n_users(), e.dim());  // Y V
  RowMatrix<double> yt_users = RowMatrix<double>::Zero(e.n_items(), e.dim());  // Y^T U
  for (Index u = 0; u < y.n_users(); ++u) {
    for (Index i : y.items_of(u)) {
      observed += e.users.row(u).dot(e.items.row(i));
      y_items.row(u) += e.items.row(i);
      yt_users.row(i) += e.users.row(u);
    }
  }
  const double loss = static_cast<double>(y.nnz()) - 2.0 * observed + gram_users.cwiseProduct(gram_items).sum();

  grad_users.noalias() += 2.0 * (e.users * gram_items - y_items);
  grad_items.noalias() += 2.0 * (e.items * gram_users - yt_users);
  return loss;
}

}  // namespace sbl
