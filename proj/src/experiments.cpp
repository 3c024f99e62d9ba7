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

#include "sbl/experiments.hpp"

#include <algorithm>

#include "sbl/powerlaw.hpp"
#include "sbl/spectral.hpp"

namespace sbl {

namespace {

double median_seconds(const TrainLog& log) {
  std::vector<double> t;
  for (const auto& rec : log.epochs) t.push_back(rec.seconds);
  std::sort(t.begin(), t.end());
  const std::size_t mid = t.size() / 2;
  return t.size() % 2 == 1 ? t[mid] : 0.5 * (t[mid - 1] + t[mid]);
}

SweepPoint measure(const InteractionMatrix& train, const InteractionMatrix& test, const TrainConfig& config,
                   double value, Index k, int groups) {
  const auto result = sbl::train(train, config);
  const auto rep = spectral_report(result.scoring, popularity(train).as_vector<double>());
  const auto ev = evaluate(result.scoring, train, test, k, groups);
  return {value, ev.popular_ratio, rep.principal_ratio, rep.cos_r_q1, ev.ndcg_at_k};
}

}  // namespace

TimingResult run_timing(const TimingConfig& config) {
  const auto y = synth_powerlaw(config.users, config.items, config.alpha, config.per_user, config.seed);
  TimingResult out;
  out.users = y.n_users();
  out.items = y.n_items();
  out.dim = config.train.dim;
  out.nnz = static_cast<Index>(y.nnz());
  out.batches_per_epoch = (out.nnz + config.train.batch_size - 1) / config.train.batch_size;
  out.threads = worker_threads();

  TrainConfig plain = config.train;
  plain.beta = 0.0;
  plain.epochs = config.epochs;
  plain.log_spectrum_every = 0;
  plain.validate_every = 0;
  TrainConfig resn = plain;
  resn.beta = config.beta;
  resn.resn_mode = ResnMode::surrogate;
  TrainConfig direct = resn;
  direct.resn_mode = ResnMode::direct;
  direct.epochs = config.direct_epochs;

  out.mf_seconds = median_seconds(train(y, plain).log);
  out.resn_seconds = median_seconds(train(y, resn).log);
  out.direct_seconds = median_seconds(train(y, direct).log);
  out.resn_overhead = out.resn_seconds / out.mf_seconds;
  out.direct_slowdown = out.direct_seconds / out.resn_seconds;
  return out;
}

std::vector<SweepPoint> sweep_beta(const InteractionMatrix& train, const InteractionMatrix& test,
                                   const TrainConfig& base, const std::vector<double>& betas, Index k, int groups) {
  std::vector<SweepPoint> out;
  for (double beta : betas) {
    TrainConfig c = base;
    c.beta = beta;
    out.push_back(measure(train, test, c, beta, k, groups));
  }
  return out;
}

std::vector<SweepPoint> sweep_dim(const InteractionMatrix& train, const InteractionMatrix& test,
                                  const TrainConfig& base, const std::vector<Index>& dims, Index k, int groups) {
  std::vector<SweepPoint> out;
  for (Index d : dims) {
    TrainConfig c = base;
    c.dim = d;
    out.push_back(measure(train, test, c, static_cast<double>(d), k, groups));
  }
  return out;
}

}  // namespace sbl
