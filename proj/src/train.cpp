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

#include "sbl/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbl/adam.hpp"
#include "sbl/error.hpp"
#include "sbl/eval.hpp"
#include "sbl/lightgcn.hpp"
#include "sbl/random.hpp"
#include "sbl/resn.hpp"

namespace sbl {

std::string to_string(Backbone b) { return b == Backbone::mf ? "mf" : "lightgcn"; }

Backbone parse_backbone(const std::string& name) {
  if (name == "mf") return Backbone::mf;
  if (name == "lightgcn") return Backbone::lightgcn;
  throw Error(ErrorKind::config, "unknown backbone '" + name + "'");
}

std::string to_string(ResnMode m) { return m == ResnMode::surrogate ? "surrogate" : "direct"; }

ResnMode parse_resn_mode(const std::string& name) {
  if (name == "surrogate") return ResnMode::surrogate;
  if (name == "direct") return ResnMode::direct;
  throw Error(ErrorKind::config, "unknown ReSN mode '" + name + "'");
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, msg); };
  if (dim < 1) fail("dim must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) fail("weight_decay must be nonnegative");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be nonnegative");
  if (epochs < 1) fail("epochs must be at least 1");
  if (loss != LossKind::mse && negatives_per_positive < 1) fail("negatives_per_positive must be at least 1 for bce/bpr");
  if (negatives_per_positive < 0) fail("negatives_per_positive must be nonnegative");
  if (batch_size < 1) fail("batch_size must be at least 1");
  if (backbone == Backbone::lightgcn && lightgcn_layers < 1) fail("lightgcn_layers must be at least 1");
  if (log_spectrum_every < 0) fail("log_spectrum_every must be nonnegative");
  if (validate_every < 0) fail("validate_every must be nonnegative");
  if (full_batch && loss != LossKind::mse) fail("full_batch requires the mse loss");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) fail("init_scale must be positive");
}

Embeddings scoring_embeddings(const Embeddings& base, const InteractionMatrix& y, const TrainConfig& config) {
  if (config.backbone == Backbone::lightgcn) return lightgcn_propagate(y, base, config.lightgcn_layers);
  return base;
}

namespace {

// Uniform over items the user has not interacted with.
Index sample_negative(const InteractionMatrix& y, Index u, Rng& rng) {
  const Index m = y.n_items();
  if (y.user_degree(u) >= m) throw Error(ErrorKind::insufficient_data, "a user interacted with every item");
  for (;;) {
    const auto j = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(m)));
    if (!y.contains(u, j)) return j;
  }
}

Batch make_batch(const InteractionMatrix& y, const std::vector<Interaction>& positives, std::size_t begin,
                 std::size_t end, const TrainConfig& config, Rng& negatives) {
  Batch batch;
  const auto per = static_cast<std::size_t>(config.negatives_per_positive);
  if (config.loss == LossKind::bpr) {
    batch.triples.reserve((end - begin) * per);
    for (std::size_t k = begin; k < end; ++k) {
      const auto& p = positives[k];
      for (std::size_t j = 0; j < per; ++j) batch.triples.push_back({p.user, p.item, sample_negative(y, p.user, negatives)});
    }
  } else {
    batch.points.reserve((end - begin) * (1 + per));
    for (std::size_t k = begin; k < end; ++k) {
      const auto& p = positives[k];
      batch.points.push_back({p.user, p.item, 1.0});
      for (std::size_t j = 0; j < per; ++j) batch.points.push_back({p.user, sample_negative(y, p.user, negatives), 0.0});
    }
  }
  return batch;
}

std::string divergence_message(Index epoch, const std::string& detail) {
  std::ostringstream msg;
  msg << "training diverged in epoch " << epoch << "; last good epoch " << epoch - 1 << " (" << detail << ")";
  return msg.str();
}

}  // namespace

TrainResult train(const InteractionMatrix& y, const TrainConfig& config, const InteractionMatrix* validation) {
  config.validate();
  if (y.empty()) throw Error(ErrorKind::empty_input, "training matrix is empty");
  if (validation != nullptr && (validation->n_users() != y.n_users() || validation->n_items() != y.n_items())) {
    throw Error(ErrorKind::config, "validation matrix disagrees with the training dimensions");
  }
  const bool propagate = config.backbone == Backbone::lightgcn;
  const Index n = y.n_users();
  const Index m = y.n_items();
  const Index d = config.dim;

  TrainResult result;
  result.base = init_embeddings(n, m, d, config.seed, config.init_scale);
  AdamState adam(result.base);
  auto shuffle_rng = make_stream(config.seed, "shuffle");
  auto negative_rng = make_stream(config.seed, "negatives");
  const Eigen::VectorXd pop = popularity(y).as_vector<double>();

  RowMatrix<double> gu(n, d);
  RowMatrix<double> gi(m, d);
  std::vector<Interaction> positives = y.entries();

  // Loss plus penalty gradient at `base` for one optimizer step. Gradients of
  // propagated embeddings are pulled back with the same (self-adjoint)
  // propagation.
  auto step = [&](const Batch* batch) {
    gu.setZero();
    gi.setZero();
    Embeddings propagated;
    if (propagate) propagated = lightgcn_propagate(y, result.base, config.lightgcn_layers);
    const Embeddings& scoring = propagate ? propagated : result.base;
    const double loss = batch == nullptr ? accumulate_full_mse(scoring, y, gu, gi)
                                         : accumulate_loss_grad(scoring, *batch, config.loss, gu, gi);
    if (config.beta > 0.0) {
      if (config.resn_mode == ResnMode::surrogate) {
        accumulate_resn_gradient(scoring, config.beta, gu, gi);
      } else {
        accumulate_direct_gradient(scoring, config.beta, gu, gi);
      }
    }
    if (propagate) {
      Embeddings back(std::move(gu), std::move(gi));
      back = lightgcn_propagate(y, back, config.lightgcn_layers);
      gu = std::move(back.users);
      gi = std::move(back.items);
    }
    adam_step(result.base, adam, gu, gi, config.learning_rate, config.weight_decay);
    return loss;
  };

  for (Index epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    double scored = 0.0;
    try {
      if (config.full_batch) {
        loss_sum = step(nullptr);
        scored = static_cast<double>(n) * static_cast<double>(m);
      } else {
        shuffle(positives.begin(), positives.end(), shuffle_rng);
        const auto bs = static_cast<std::size_t>(config.batch_size);
        for (std::size_t begin = 0; begin < positives.size(); begin += bs) {
          const std::size_t end = std::min(positives.size(), begin + bs);
          const Batch batch = make_batch(y, positives, begin, end, config, negative_rng);
          loss_sum += step(&batch);
          scored += static_cast<double>(config.loss == LossKind::bpr ? batch.triples.size() : batch.points.size());
        }
      }
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::divergence) throw Error(ErrorKind::divergence, divergence_message(epoch, err.what()));
      throw;
    }
    if (!std::isfinite(loss_sum) || !result.base.all_finite()) {
      throw Error(ErrorKind::divergence, divergence_message(epoch, "non-finite loss"));
    }
    const auto stop = std::chrono::steady_clock::now();

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = scored > 0 ? loss_sum / scored : 0.0;
    rec.seconds = std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
    const bool snapshot = config.log_spectrum_every > 0 && epoch % config.log_spectrum_every == 0;
    const bool validate = validation != nullptr && config.validate_every > 0 && epoch % config.validate_every == 0;
    if (config.beta > 0.0 || snapshot || validate) {
      const Embeddings scoring = scoring_embeddings(result.base, y, config);
      if (config.beta > 0.0) rec.penalty = resn_penalty(scoring).value;
      if (snapshot) rec.snapshot = spectral_report(scoring, pop);
      if (validate && !validation->empty()) {
        const Index k = std::min<Index>(20, m);
        rec.validation_ndcg = ndcg_at_k(topk_recommend(scoring, y, k), *validation, k).ndcg;
      }
    }
    result.log.epochs.push_back(std::move(rec));
  }
  result.scoring = scoring_embeddings(result.base, y, config);
  return result;
}

void write_spectrum_log(const std::filesystem::path& path, const TrainLog& log) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.precision(17);
  out << "epoch,k,sigma_k\n";
  for (const auto& rec : log.epochs) {
    if (!rec.snapshot) continue;
    const auto& sv = rec.snapshot->singular_values;
    for (Index k = 0; k < sv.size(); ++k) out << rec.epoch << ',' << k + 1 << ',' << sv[k] << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

}  // namespace sbl
