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

#include <filesystem>
#include <fstream>
#include <string>

#include "sbl/error.hpp"
#include "sbl/json_io.hpp"
#include "sbl/lightgcn.hpp"
#include "sbl/loss.hpp"
#include "sbl/powerlaw.hpp"
#include "sbl/train.hpp"
#include "test_util.hpp"

namespace sbl {
namespace {

namespace fs = std::filesystem;
using testing::central_difference;
using testing::random_embeddings;
using testing::relative_error;

InteractionMatrix small_data() { return synth_powerlaw(60, 40, 1.2, 6, 5); }

TEST(TrainTest, BetaZeroLeavesPenaltyColumnEmpty) {
  TrainConfig c;
  c.dim = 4;
  c.epochs = 3;
  c.batch_size = 64;
  const auto r = train(small_data(), c);
  ASSERT_EQ(r.log.epochs.size(), 3u);
  for (const auto& rec : r.log.epochs) {
    EXPECT_EQ(rec.penalty, 0.0);
    EXPECT_GT(rec.seconds, 0.0);
  }
  EXPECT_EQ(r.log.epochs[0].epoch, 1);
  EXPECT_EQ(r.log.epochs[2].epoch, 3);
}

TEST(TrainTest, FitsRankOneTruth) {
  // y_ui = 1 when a_u b_i > 0.
  std::vector<Interaction> e;
  for (Index u = 0; u < 30; ++u) {
    for (Index i = 0; i < 20; ++i) {
      if ((u % 3 == 0) == (i % 2 == 0)) e.push_back({u, i});
    }
  }
  const InteractionMatrix y(30, 20, e);
  TrainConfig c;
  c.dim = 4;
  c.epochs = 200;
  c.full_batch = true;
  c.learning_rate = 0.05;
  const auto r = train(y, c);
  EXPECT_LT(r.log.epochs.back().loss, 0.05);
}

TEST(TrainTest, BitwiseDeterministic) {
  for (LossKind loss : {LossKind::bce, LossKind::bpr}) {
    TrainConfig c;
    c.dim = 5;
    c.epochs = 3;
    c.loss = loss;
    c.negatives_per_positive = 2;
    c.batch_size = 50;
    c.beta = 0.1;
    c.backbone = Backbone::lightgcn;
    const auto a = train(small_data(), c);
    const auto b = train(small_data(), c);
    EXPECT_EQ(a.base.users, b.base.users);
    EXPECT_EQ(a.base.items, b.base.items);
    c.seed = 2;
    EXPECT_NE(train(small_data(), c).base.users, a.base.users);
  }
}

TEST(TrainTest, FullBatchLossNonIncreasingAtSmallRate) {
  std::vector<Interaction> e;
  for (Index u = 0; u < 20; ++u) {
    for (Index i = 0; i < 20; ++i) {
      if ((u * 7 + i * 3) % 5 < 2) e.push_back({u, i});
    }
  }
  TrainConfig c;
  c.dim = 4;
  c.epochs = 100;
  c.full_batch = true;
  c.learning_rate = 1e-3;
  const auto r = train(InteractionMatrix(20, 20, e), c);
  for (std::size_t k = 1; k < r.log.epochs.size(); ++k) {
    EXPECT_LE(r.log.epochs[k].loss, r.log.epochs[k - 1].loss) << "epoch " << k + 1;
  }
}

TEST(TrainTest, PenaltyShrinksSpectralMass) {
  TrainConfig c;
  c.dim = 8;
  c.epochs = 40;
  c.full_batch = true;
  c.learning_rate = 0.01;
  c.log_spectrum_every = 40;
  const auto y = synth_powerlaw(200, 100, 1.5, 10, 2);
  const auto plain = train(y, c);
  c.beta = 1.0;
  const auto reg = train(y, c);
  EXPECT_LT(reg.log.epochs.back().snapshot->sigma1, plain.log.epochs.back().snapshot->sigma1);
  EXPECT_GT(reg.log.epochs.back().penalty, 0.0);
}

TEST(TrainTest, DirectModeTrains) {
  TrainConfig c;
  c.dim = 4;
  c.epochs = 2;
  c.beta = 0.1;
  c.resn_mode = ResnMode::direct;
  const auto r = train(small_data(), c);
  EXPECT_TRUE(r.base.all_finite());
}

TEST(TrainTest, DivergenceNamesLastGoodEpoch) {
  TrainConfig c;
  c.dim = 4;
  c.epochs = 5;
  c.learning_rate = 1e300;
  c.full_batch = true;
  try {
    train(small_data(), c);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergence);
    EXPECT_NE(std::string(e.what()).find("last good epoch"), std::string::npos);
  }
}

// Gradient of loss(propagate(E)) equals propagate(gradient at propagate(E)).
TEST(TrainTest, PropagationChainRule) {
  const InteractionMatrix y(6, 7, {{0, 0}, {0, 3}, {1, 3}, {2, 1}, {2, 5}, {3, 0}, {4, 6}, {5, 2}, {5, 6}});
  const Embeddings e = random_embeddings(6, 7, 3, 4);
  auto f = [&](const Embeddings& x) {
    RowMatrix<double> gu = RowMatrix<double>::Zero(6, 3), gi = RowMatrix<double>::Zero(7, 3);
    return accumulate_full_mse(lightgcn_propagate(y, x, 2), y, gu, gi);
  };
  const Embeddings p = lightgcn_propagate(y, e, 2);
  RowMatrix<double> gu = RowMatrix<double>::Zero(6, 3), gi = RowMatrix<double>::Zero(7, 3);
  accumulate_full_mse(p, y, gu, gi);
  const Embeddings back = lightgcn_propagate(y, Embeddings(gu, gi), 2);
  const auto fd = central_difference(e, f);
  EXPECT_LT(relative_error(back.users, fd.users), 1e-7);
  EXPECT_LT(relative_error(back.items, fd.items), 1e-7);
}

TEST(TrainTest, ConfigValidation) {
  TrainConfig c;
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.loss = LossKind::bpr;
  c.negatives_per_positive = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.full_batch = true;
  c.loss = LossKind::bce;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(train(InteractionMatrix(3, 3, {}), TrainConfig{}), Error);
}

TEST(TrainTest, ConfigJsonRoundTrip) {
  TrainConfig c;
  c.dim = 17;
  c.loss = LossKind::bpr;
  c.learning_rate = 0.0123;
  c.weight_decay = 1e-4;
  c.beta = 0.5;
  c.epochs = 9;
  c.negatives_per_positive = 3;
  c.batch_size = 77;
  c.seed = 12345678901234ULL;
  c.backbone = Backbone::lightgcn;
  c.lightgcn_layers = 3;
  c.log_spectrum_every = 2;
  c.resn_mode = ResnMode::direct;
  c.init_scale = 0.25;
  c.validate_every = 4;
  const TrainConfig back = train_config_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(train_config_from_json(Json{{"loss", "hinge"}}), Error);
  EXPECT_THROW(train_config_from_json(Json{{"d", "wide"}}), Error);
}

TEST(TrainTest, SpectrumLogAndValidation) {
  TrainConfig c;
  c.dim = 3;
  c.epochs = 4;
  c.log_spectrum_every = 2;
  c.validate_every = 2;
  const auto y = small_data();
  const auto r = train(y, c, &y);
  EXPECT_FALSE(r.log.epochs[0].snapshot.has_value());
  ASSERT_TRUE(r.log.epochs[1].snapshot.has_value());
  EXPECT_TRUE(r.log.epochs[3].validation_ndcg.has_value());
  const fs::path path = fs::temp_directory_path() / "sbl-spectrum-log-test.csv";
  write_spectrum_log(path, r.log);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,k,sigma_k");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * 3);
  fs::remove(path);
}

}  // namespace
}  // namespace sbl
