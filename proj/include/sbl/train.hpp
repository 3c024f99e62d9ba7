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

#ifndef SBL_TRAIN_HPP
#define SBL_TRAIN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbl/embedding.hpp"
#include "sbl/interactions.hpp"
#include "sbl/loss.hpp"
#include "sbl/spectral.hpp"

namespace sbl {

enum class Backbone { mf, lightgcn };
// surrogate: the O((n + m) d) quotient; direct: dense power iteration on the
// materialised score matrix at every application.
enum class ResnMode { surrogate, direct };

std::string to_string(Backbone b);
Backbone parse_backbone(const std::string& name);
std::string to_string(ResnMode m);
ResnMode parse_resn_mode(const std::string& name);

struct TrainConfig {
  Index dim = 64;
  LossKind loss = LossKind::mse;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  // Applied once per optimizer step, so the per-epoch strength grows with the
  // number of batches in an epoch.
  double beta = 0.0;
  Index epochs = 100;
  Index negatives_per_positive = 1;
  // Observed interactions per batch; each batch also carries their negatives.
  Index batch_size = 2048;
  std::uint64_t seed = 1;
  Backbone backbone = Backbone::mf;
  int lightgcn_layers = 2;
  Index log_spectrum_every = 0;
  // One step per epoch on the whole matrix (mse only, no sampling).
  bool full_batch = false;
  ResnMode resn_mode = ResnMode::surrogate;
  double init_scale = 1.0;
  // Validation NDCG@20 cadence in epochs; 0 disables. Logged only.
  Index validate_every = 0;

  // Throws a config error naming the first violated constraint.
  void validate() const;
};

struct EpochRecord {
  Index epoch = 0;  // 1-based
  double loss = 0.0;  // mean per scored entry
  double penalty = 0.0;  // surrogate value at the end of the epoch, 0 when beta == 0
  double seconds = 0.0;
  std::optional<SpectralReport<double>> snapshot;
  std::optional<double> validation_ndcg;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
};

struct TrainResult {
  Embeddings base;
  // What scores are computed from: `base` for mf, the propagated pair for
  // lightgcn.
  Embeddings scoring;
  TrainLog log;
};

// Adam on loss + beta * ReSN penalty. Deterministic for a given config; the
// "init", "shuffle" and "negatives" streams derive from config.seed. A
// non-finite loss or gradient aborts with a divergence error naming the last
// good epoch.
TrainResult train(const InteractionMatrix& y, const TrainConfig& config,
                  const InteractionMatrix* validation = nullptr);

// Scores used for evaluation and spectra of a stored model.
Embeddings scoring_embeddings(const Embeddings& base, const InteractionMatrix& y, const TrainConfig& config);

// Rows "epoch,k,sigma_k" for every snapshot, k 1-based.
void write_spectrum_log(const std::filesystem::path& path, const TrainLog& log);

}  // namespace sbl

#endif  // SBL_TRAIN_HPP
