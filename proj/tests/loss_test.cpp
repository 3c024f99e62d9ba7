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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sbl/error.hpp"
#include "sbl/loss.hpp"
#include "sbl/random.hpp"
#include "test_util.hpp"

namespace sbl {
namespace {

using testing::central_difference;
using testing::random_embeddings;
using testing::relative_error;

Batch random_batch(Index n, Index m, std::uint64_t seed) {
  auto rng = make_stream(seed, "test-batch");
  Batch b;
  for (int k = 0; k < 12; ++k) {
    const auto u = static_cast<Index>(uniform_index(rng, n));
    const auto i = static_cast<Index>(uniform_index(rng, m));
    b.points.push_back({u, i, uniform01(rng) < 0.5 ? 1.0 : 0.0});
    auto j = static_cast<Index>(uniform_index(rng, m));
    if (j == i) j = (j + 1) % m;
    b.triples.push_back({u, i, j});
  }
  return b;
}

class LossGradientTest : public ::testing::TestWithParam<LossKind> {};

TEST_P(LossGradientTest, MatchesCentralDifferences) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Embeddings e = random_embeddings(6, 7, 3, seed);
    const Batch batch = random_batch(6, 7, seed);
    const auto analytic = loss_and_grad(e, batch, GetParam());
    const auto fd = central_difference(e, [&](const Embeddings& x) { return loss_and_grad(x, batch, GetParam()).loss; });
    EXPECT_LT(relative_error(analytic.grad_users, fd.users), 1e-6) << "seed " << seed;
    EXPECT_LT(relative_error(analytic.grad_items, fd.items), 1e-6) << "seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(AllLosses, LossGradientTest, ::testing::Values(LossKind::mse, LossKind::bce, LossKind::bpr));

TEST(LossTest, MseValueByHand) {
  Embeddings e(RowMatrix<double>{{1.0, 2.0}}, RowMatrix<double>{{0.5, 0.25}});
  Batch b;
  b.points = {{0, 0, 1.0}};
  // s = 1, residual 0.
  EXPECT_DOUBLE_EQ(loss_and_grad(e, b, LossKind::mse).loss, 0.0);
  b.points = {{0, 0, 0.0}};
  EXPECT_DOUBLE_EQ(loss_and_grad(e, b, LossKind::mse).loss, 1.0);
}

TEST(LossTest, BceAtZeroScoreIsLogTwo) {
  Embeddings e(RowMatrix<double>::Zero(1, 2), RowMatrix<double>::Zero(1, 2));
  Batch b;
  b.points = {{0, 0, 1.0}};
  EXPECT_NEAR(loss_and_grad(e, b, LossKind::bce).loss, std::log(2.0), 1e-15);
}

TEST(LossTest, BceClampsExtremeScores) {
  Embeddings e(RowMatrix<double>{{100.0}}, RowMatrix<double>{{100.0}});
  Batch b;
  b.points = {{0, 0, 0.0}};
  const double loss = loss_and_grad(e, b, LossKind::bce).loss;
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -std::log(1e-12), 1e-6);
}

TEST(LossTest, BprInvariantToItemShift) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Embeddings e = random_embeddings(5, 6, 3, seed);
    const Batch batch = random_batch(5, 6, seed);
    Embeddings shifted = e;
    const Eigen::RowVector3d c(0.3, -1.7, 2.2);
    shifted.items.rowwise() += c;
    EXPECT_LT(std::abs(loss_and_grad(e, batch, LossKind::bpr).loss -
                       loss_and_grad(shifted, batch, LossKind::bpr).loss),
              1e-9);
  }
}

TEST(LossTest, FullMseMatchesDenseResidual) {
  const Embeddings e = random_embeddings(7, 5, 3, 4);
  std::vector<Interaction> entries{{0, 1}, {1, 0}, {2, 4}, {3, 3}, {6, 2}, {6, 0}};
  const InteractionMatrix y(7, 5, entries);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(7, 5);
  for (const auto& p : entries) dense(p.user, p.item) = 1.0;
  RowMatrix<double> gu = RowMatrix<double>::Zero(7, 3), gi = RowMatrix<double>::Zero(5, 3);
  const double loss = accumulate_full_mse(e, y, gu, gi);
  EXPECT_NEAR(loss, (dense - e.dense_scores()).squaredNorm(), 1e-12);

  const auto fd = central_difference(e, [&](const Embeddings& x) { return (dense - x.dense_scores()).squaredNorm(); });
  EXPECT_LT(relative_error(gu, fd.users), 1e-7);
  EXPECT_LT(relative_error(gi, fd.items), 1e-7);
}

TEST(LossTest, ParseRejectsUnknown) {
  EXPECT_EQ(parse_loss("bpr"), LossKind::bpr);
  EXPECT_THROW(parse_loss("hinge"), Error);
}

}  // namespace
}  // namespace sbl
