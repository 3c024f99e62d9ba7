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

#ifndef SBL_EXPERIMENTS_HPP
#define SBL_EXPERIMENTS_HPP

#include <vector>

#include "sbl/eval.hpp"
#include "sbl/interactions.hpp"
#include "sbl/train.hpp"

namespace sbl {

// Per-epoch wall time of three otherwise identical runs: plain MF, MF with
// the surrogate penalty, and MF with the direct dense penalty.
struct TimingConfig {
  Index users = 2000;
  Index items = 2000;
  double alpha = 1.5;
  Index per_user = 20;
  std::uint64_t seed = 1;
  TrainConfig train;  // beta is overridden per run
  double beta = 1e-3;
  Index epochs = 3;         // plain and surrogate runs
  Index direct_epochs = 1;  // direct run
};

struct TimingResult {
  Index users = 0;
  Index items = 0;
  Index dim = 0;
  Index nnz = 0;
  Index batches_per_epoch = 0;
  int threads = 1;
  // Median over epochs.
  double mf_seconds = 0.0;
  double resn_seconds = 0.0;
  double direct_seconds = 0.0;
  double resn_overhead = 0.0;   // resn / mf
  double direct_slowdown = 0.0; // direct / resn
};

TimingResult run_timing(const TimingConfig& config);

struct SweepPoint {
  double value = 0.0;  // beta or d
  double popular_ratio = 0.0;
  double principal_ratio = 0.0;
  double cos_r_q1 = 0.0;
  double ndcg = 0.0;
};

// One training run per grid value with everything else fixed; metrics on
// `test` with the given cutoff and popularity groups.
std::vector<SweepPoint> sweep_beta(const InteractionMatrix& train, const InteractionMatrix& test,
                                   const TrainConfig& base, const std::vector<double>& betas, Index k = 20,
                                   int groups = 5);
std::vector<SweepPoint> sweep_dim(const InteractionMatrix& train, const InteractionMatrix& test,
                                  const TrainConfig& base, const std::vector<Index>& dims, Index k = 20,
                                  int groups = 5);

}  // namespace sbl

#endif  // SBL_EXPERIMENTS_HPP
