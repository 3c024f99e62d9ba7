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

#include "sbl/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbl/embedding.hpp"
#include "sbl/error.hpp"
#include "sbl/eval.hpp"
#include "sbl/experiments.hpp"
#include "sbl/interactions.hpp"
#include "sbl/json_io.hpp"
#include "sbl/powerlaw.hpp"
#include "sbl/resn.hpp"
#include "sbl/spectral.hpp"
#include "sbl/split.hpp"
#include "sbl/theory.hpp"
#include "sbl/train.hpp"

namespace sbl::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kModelFile = "model.bin";
constexpr const char* kModelMeta = "model_meta.json";
constexpr const char* kSplitMeta = "split_meta.json";

// Flags shared by every subcommand that trains.
struct TrainFlags {
  TrainConfig config;
  std::string loss = "mse";
  std::string backbone = "mf";
  std::string resn_mode = "surrogate";
  std::string config_file;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_file, "JSON training config; explicit flags override it");
    app->add_option("--loss", loss, "mse, bce or bpr");
    app->add_option("--dim", config.dim, "embedding dimension");
    app->add_option("--lr", config.learning_rate, "Adam learning rate");
    app->add_option("--weight-decay", config.weight_decay, "decoupled weight decay");
    app->add_option("--beta", config.beta, "ReSN coefficient, applied once per optimizer step");
    app->add_option("--epochs", config.epochs, "number of epochs");
    app->add_option("--negatives", config.negatives_per_positive, "sampled negatives per observed pair");
    app->add_option("--batch-size", config.batch_size, "observed pairs per batch");
    app->add_option("--seed", config.seed, "seed for the init, shuffle and negatives streams");
    app->add_option("--backbone", backbone, "mf or lightgcn");
    app->add_option("--layers", config.lightgcn_layers, "LightGCN propagation layers");
    app->add_option("--log-spectrum-every", config.log_spectrum_every, "epochs between spectral snapshots (0 = never)");
    app->add_flag("--full-batch", config.full_batch, "one full-matrix MSE step per epoch");
    app->add_option("--resn-mode", resn_mode, "surrogate or direct");
    app->add_option("--init-scale", config.init_scale, "multiplier on the Xavier bound");
    app->add_option("--validate-every", config.validate_every, "epochs between validation NDCG@20 (0 = never)");
  }

  TrainConfig resolve(const CLI::App* app) const {
    TrainConfig c = config;
    if (!config_file.empty()) {
      c = train_config_from_json(read_json(config_file));
      // Explicit flags win over the file.
      auto given = [app](const char* name) { return app->count(name) > 0; };
      if (given("--dim")) c.dim = config.dim;
      if (given("--lr")) c.learning_rate = config.learning_rate;
      if (given("--weight-decay")) c.weight_decay = config.weight_decay;
      if (given("--beta")) c.beta = config.beta;
      if (given("--epochs")) c.epochs = config.epochs;
      if (given("--negatives")) c.negatives_per_positive = config.negatives_per_positive;
      if (given("--batch-size")) c.batch_size = config.batch_size;
      if (given("--seed")) c.seed = config.seed;
      if (given("--layers")) c.lightgcn_layers = config.lightgcn_layers;
      if (given("--log-spectrum-every")) c.log_spectrum_every = config.log_spectrum_every;
      if (given("--full-batch")) c.full_batch = config.full_batch;
      if (given("--init-scale")) c.init_scale = config.init_scale;
      if (given("--validate-every")) c.validate_every = config.validate_every;
      if (given("--loss")) c.loss = parse_loss(loss);
      if (given("--backbone")) c.backbone = parse_backbone(backbone);
      if (given("--resn-mode")) c.resn_mode = parse_resn_mode(resn_mode);
    } else {
      c.loss = parse_loss(loss);
      c.backbone = parse_backbone(backbone);
      c.resn_mode = parse_resn_mode(resn_mode);
    }
    c.validate();
    return c;
  }
};

// Dimensions of an id-indexed file: split_meta.json beside it if present,
// otherwise max id + 1.
std::pair<Index, Index> split_dims(const fs::path& data) {
  const fs::path meta = data.parent_path() / kSplitMeta;
  if (!fs::exists(meta)) return {-1, -1};
  const auto j = read_json(meta);
  return {j.value("n_users", Index{-1}), j.value("n_items", Index{-1})};
}

InteractionMatrix load_ids(const fs::path& path, PairFormat format, Index n = -1, Index m = -1) {
  if (n < 0 || m < 0) std::tie(n, m) = split_dims(path);
  return load_indexed_interactions(path, format, n, m).matrix;
}

struct StoredModel {
  Embeddings base;
  TrainConfig config;
};

StoredModel load_model(const fs::path& checkpoint) {
  StoredModel model;
  model.base = load_checkpoint(checkpoint);
  const fs::path meta = checkpoint.parent_path() / kModelMeta;
  if (fs::exists(meta)) {
    const auto j = read_json(meta);
    if (j.contains("train_config")) model.config = train_config_from_json(j["train_config"]);
  }
  model.config.dim = model.base.dim();
  return model;
}

void emit(const Json& j, const std::string& out) {
  if (!out.empty()) write_json(out, j);
  std::cout << j.dump(2) << '\n';
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

void print_bound_table(const BoundReport& r) {
  auto row = [](const std::string& name, const std::string& bound, const std::string& observed,
                const std::string& satisfied) {
    std::cout << std::left << std::setw(16) << name << std::right << std::setw(12) << bound << std::setw(12)
              << observed << std::setw(12) << satisfied << '\n';
  };
  auto yes_no = [](bool b) { return std::string(b ? "yes" : "no"); };
  row("bound", "value", "observed", "satisfied");
  if (!r.applicable) {
    row("thm1_general", "n/a", fixed(r.observed_cos), "n/a");
    row("thm1_simple", "n/a", fixed(r.observed_cos), "n/a");
    row("thm2", "n/a", fixed(r.observed_eta), "n/a");
  } else {
    row("thm1_general", fixed(r.thm1_general), fixed(r.observed_cos),
        yes_no(r.thm1_general_satisfied) + (r.thm1_vacuous ? "*" : ""));
    row("thm1_simple", r.thm1_simple ? fixed(*r.thm1_simple) : "n/a", fixed(r.observed_cos),
        r.thm1_simple_satisfied ? yes_no(*r.thm1_simple_satisfied) : "n/a");
    row("thm2", fixed(r.thm2_bound), fixed(r.observed_eta),
        r.thm2_satisfied ? yes_no(*r.thm2_satisfied) + (r.thm2_vacuous ? "*" : "") : "n/a");
  }
  std::cout << "alpha " << fixed(r.alpha) << " (r^2 " << fixed(r.alpha_r_squared) << "), sigma1 " << fixed(r.sigma1)
            << ", r_max " << fixed(r.r_max) << "; * marks a vacuous bound\n";
}

Json sweep_json(const char* parameter, const std::vector<SweepPoint>& points, const TrainConfig& base, Index k) {
  Json arr = Json::array();
  for (const auto& p : points) {
    arr.push_back(Json{{parameter, p.value},
                       {"popular_ratio", p.popular_ratio},
                       {"principal_ratio", p.principal_ratio},
                       {"cos_r_q1", p.cos_r_q1},
                       {"ndcg_at_k", p.ndcg}});
  }
  return Json{{"parameter", parameter}, {"k", k}, {"train_config", to_json(base)}, {"points", arr}};
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Spectral analysis and ReSN training for embedding recommenders", "sbl"};
  app.require_subcommand(1);
  std::string format_name = "tsv";
  app.add_option("--format", format_name, "pair file format: tsv or csv");

  // synth
  auto* synth = app.add_subcommand("synth", "Zipf-distributed synthetic interactions");
  Index s_users = 2000, s_items = 1000, s_per_user = 20, s_latent = 16;
  double s_alpha = 1.5, s_affinity = 0.0;
  std::uint64_t s_seed = 1;
  std::string s_out;
  synth->add_option("--users", s_users, "number of users");
  synth->add_option("--items", s_items, "number of items");
  synth->add_option("--alpha", s_alpha, "Zipf shape");
  synth->add_option("--per-user", s_per_user, "interactions per user");
  synth->add_option("--seed", s_seed, "seed");
  synth->add_option("--affinity", s_affinity, "strength of the latent user/item preference (0 = pure Zipf)");
  synth->add_option("--latent-dim", s_latent, "latent dimension used when affinity > 0");
  synth->add_option("--out", s_out, "output pair file")->required();

  // split
  auto* split = app.add_subcommand("split", "train/valid/test split");
  std::string sp_data, sp_out, sp_paradigm = "common";
  std::uint64_t sp_seed = 1;
  Index sp_per_item = 1;
  split->add_option("--data", sp_data, "pair file")->required();
  split->add_option("--paradigm", sp_paradigm, "common or debiased (uniform-exposure tests come via eval --test-file)");
  split->add_option("--seed", sp_seed, "seed for the splits stream");
  split->add_option("--test-per-item", sp_per_item, "debiased: test interactions per item");
  split->add_option("--out-dir", sp_out, "output directory")->required();

  // train
  auto* trn = app.add_subcommand("train", "train a model");
  TrainFlags t_flags;
  std::string t_data, t_out, t_valid;
  t_flags.add_to(trn);
  trn->add_option("--data", t_data, "training pair file (0-based ids)")->required();
  trn->add_option("--validation", t_valid, "validation pair file for logged NDCG@20");
  trn->add_option("--out", t_out, "output directory")->required();

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "spectral report of a trained model");
  std::string sc_ckpt, sc_data, sc_out, sc_activation;
  bool sc_estimates = false;
  spec->add_option("--checkpoint", sc_ckpt, "model.bin")->required();
  spec->add_option("--data", sc_data, "training pair file")->required();
  spec->add_option("--post-activation", sc_activation,
                   "identity or sigmoid: dense report of the activated matrix (n*m <= 40000)");
  spec->add_flag("--estimates", sc_estimates, "compare the surrogate with the exact squared spectral norm");
  spec->add_option("--out", sc_out, "also write the JSON here");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate the popularity-alignment bounds");
  std::string b_ckpt, b_data, b_out;
  bool b_json = false;
  bnd->add_option("--checkpoint", b_ckpt, "model.bin")->required();
  bnd->add_option("--data", b_data, "training pair file")->required();
  bnd->add_flag("--json", b_json, "print JSON instead of the table");
  bnd->add_option("--out", b_out, "also write the JSON here");

  // eval
  auto* evl = app.add_subcommand("eval", "NDCG and popularity exposure");
  std::string e_ckpt, e_data, e_test, e_out;
  Index e_k = 20;
  int e_groups = 5;
  evl->add_option("--checkpoint", e_ckpt, "model.bin")->required();
  evl->add_option("--data", e_data, "training pair file")->required();
  evl->add_option("--test-file", e_test, "test pair file (default: test.tsv beside --data)");
  evl->add_option("--k", e_k, "cutoff");
  evl->add_option("--groups", e_groups, "popularity groups");
  evl->add_option("--out", e_out, "also write the JSON here");

  // timing
  auto* tim = app.add_subcommand("timing", "per-epoch time of MF, ReSN and the direct baseline");
  TimingConfig tm;
  tm.train.dim = 64;
  tm.train.batch_size = 8192;
  tm.train.negatives_per_positive = 4;
  std::string tm_out;
  tim->add_option("--users", tm.users, "number of users");
  tim->add_option("--items", tm.items, "number of items");
  tim->add_option("--alpha", tm.alpha, "Zipf shape");
  tim->add_option("--per-user", tm.per_user, "interactions per user");
  tim->add_option("--dim", tm.train.dim, "embedding dimension");
  tim->add_option("--batch-size", tm.train.batch_size, "observed pairs per batch");
  tim->add_option("--negatives", tm.train.negatives_per_positive, "negatives per observed pair");
  tim->add_option("--beta", tm.beta, "ReSN coefficient");
  tim->add_option("--epochs", tm.epochs, "epochs for the MF and ReSN runs");
  tim->add_option("--direct-epochs", tm.direct_epochs, "epochs for the direct run");
  tim->add_option("--seed", tm.seed, "seed");
  tim->add_option("--out", tm_out, "also write the JSON here");

  // sweeps
  auto* swb = app.add_subcommand("sweep-beta", "train over a beta grid");
  TrainFlags sb_flags;
  std::vector<double> sb_grid{1e-4, 1e-3, 1e-2, 1e-1, 5e-1, 1.0, 5.0};
  std::string sb_data, sb_test, sb_out;
  Index sb_k = 20;
  int sb_groups = 5;
  sb_flags.add_to(swb);
  swb->add_option("--data", sb_data, "training pair file")->required();
  swb->add_option("--test-file", sb_test, "test pair file (default: test.tsv beside --data)");
  swb->add_option("--betas", sb_grid, "beta grid")->delimiter(',');
  swb->add_option("--k", sb_k, "cutoff");
  swb->add_option("--groups", sb_groups, "popularity groups");
  swb->add_option("--out", sb_out, "also write the JSON here");

  auto* swd = app.add_subcommand("sweep-dim", "train over a dimension grid");
  TrainFlags sd_flags;
  std::vector<Index> sd_grid{8, 16, 32, 64, 128};
  std::string sd_data, sd_test, sd_out;
  Index sd_k = 20;
  int sd_groups = 5;
  sd_flags.add_to(swd);
  swd->add_option("--data", sd_data, "training pair file")->required();
  swd->add_option("--test-file", sd_test, "test pair file (default: test.tsv beside --data)");
  swd->add_option("--dims", sd_grid, "dimension grid")->delimiter(',');
  swd->add_option("--k", sd_k, "cutoff");
  swd->add_option("--groups", sd_groups, "popularity groups");
  swd->add_option("--out", sd_out, "also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  auto test_path = [](const std::string& explicit_path, const std::string& data) {
    return explicit_path.empty() ? fs::path(data).parent_path() / "test.tsv" : fs::path(explicit_path);
  };

  try {
    const PairFormat format = parse_pair_format(format_name);

    if (*synth) {
      const auto y = s_affinity == 0.0
                         ? synth_powerlaw(s_users, s_items, s_alpha, s_per_user, s_seed)
                         : synth_latent_powerlaw(s_users, s_items, s_alpha, s_per_user, s_latent, s_affinity, s_seed);
      write_interactions(s_out, y, format);
      std::cout << Json{{"out", s_out}, {"n_users", y.n_users()}, {"n_items", y.n_items()}, {"nnz", y.nnz()}}.dump()
                << '\n';
    } else if (*split) {
      const auto loaded = load_interactions(sp_data, format);
      const Paradigm paradigm = parse_paradigm(sp_paradigm);
      SplitBundle bundle;
      if (paradigm == Paradigm::common) {
        bundle = split_common(loaded.matrix, sp_seed);
      } else if (paradigm == Paradigm::debiased) {
        bundle = split_debiased(loaded.matrix, sp_seed, sp_per_item);
      } else {
        throw Error(ErrorKind::config, "uniform_exposure tests are external; pass them to eval --test-file");
      }
      write_split(sp_out, bundle, loaded.tokens);
      std::cout << Json{{"out_dir", sp_out},
                        {"train", bundle.train.nnz()},
                        {"valid", bundle.validation.nnz()},
                        {"test", bundle.test.nnz()},
                        {"duplicates_dropped", loaded.duplicates}}
                       .dump()
                << '\n';
    } else if (*trn) {
      const TrainConfig config = t_flags.resolve(trn);
      const auto y = load_ids(t_data, format);
      InteractionMatrix valid;
      if (!t_valid.empty()) valid = load_ids(t_valid, format, y.n_users(), y.n_items());
      const auto result = train(y, config, t_valid.empty() ? nullptr : &valid);
      fs::create_directories(t_out);
      save_checkpoint(fs::path(t_out) / kModelFile, result.base);
      write_json(fs::path(t_out) / kModelMeta, Json{{"train_config", to_json(config)},
                                                    {"n_users", y.n_users()},
                                                    {"n_items", y.n_items()},
                                                    {"data", t_data}});
      write_json(fs::path(t_out) / "train_log.json", to_json(result.log));
      if (config.log_spectrum_every > 0) write_spectrum_log(fs::path(t_out) / "spectrum_log.csv", result.log);
      const auto& last = result.log.epochs.back();
      std::cout << Json{{"out", t_out}, {"epochs", last.epoch}, {"final_loss", last.loss}, {"final_penalty", last.penalty}}
                       .dump()
                << '\n';
    } else if (*spec) {
      const auto model = load_model(sc_ckpt);
      const auto y = load_ids(sc_data, format, model.base.n_users(), model.base.n_items());
      const Embeddings scoring = scoring_embeddings(model.base, y, model.config);
      const Eigen::VectorXd pop = popularity(y).as_vector<double>();
      if (sc_estimates) {
        emit(to_json(compare_estimates(scoring)), sc_out);
      } else if (!sc_activation.empty()) {
        const Activation act = sc_activation == "sigmoid"    ? Activation::sigmoid
                               : sc_activation == "identity" ? Activation::identity
                                                             : throw Error(ErrorKind::config, "unknown activation '" + sc_activation + "'");
        emit(to_json(dense_postactivation_spectrum(scoring, pop, act)), sc_out);
      } else {
        emit(to_json(spectral_report(scoring, pop)), sc_out);
      }
    } else if (*bnd) {
      const auto model = load_model(b_ckpt);
      const auto y = load_ids(b_data, format, model.base.n_users(), model.base.n_items());
      const auto rep = bound_report(scoring_embeddings(model.base, y, model.config), y);
      if (!b_out.empty()) write_json(b_out, to_json(rep));
      if (b_json) {
        std::cout << to_json(rep).dump(2) << '\n';
      } else {
        print_bound_table(rep);
      }
    } else if (*evl) {
      const auto model = load_model(e_ckpt);
      const auto y = load_ids(e_data, format, model.base.n_users(), model.base.n_items());
      const auto test = load_ids(test_path(e_test, e_data), format, y.n_users(), y.n_items());
      emit(to_json(evaluate(scoring_embeddings(model.base, y, model.config), y, test, e_k, e_groups)), e_out);
    } else if (*tim) {
      const auto r = run_timing(tm);
      emit(Json{{"n_users", r.users},
                {"n_items", r.items},
                {"dim", r.dim},
                {"nnz", r.nnz},
                {"batches_per_epoch", r.batches_per_epoch},
                {"threads", r.threads},
                {"beta", tm.beta},
                {"mf_seconds_per_epoch", r.mf_seconds},
                {"resn_seconds_per_epoch", r.resn_seconds},
                {"direct_seconds_per_epoch", r.direct_seconds},
                {"resn_overhead", r.resn_overhead},
                {"direct_slowdown", r.direct_slowdown}},
           tm_out);
    } else if (*swb) {
      const TrainConfig base = sb_flags.resolve(swb);
      const auto y = load_ids(sb_data, format);
      const auto test = load_ids(test_path(sb_test, sb_data), format, y.n_users(), y.n_items());
      emit(sweep_json("beta", sweep_beta(y, test, base, sb_grid, sb_k, sb_groups), base, sb_k), sb_out);
    } else if (*swd) {
      const TrainConfig base = sd_flags.resolve(swd);
      const auto y = load_ids(sd_data, format);
      const auto test = load_ids(test_path(sd_test, sd_data), format, y.n_users(), y.n_items());
      emit(sweep_json("d", sweep_dim(y, test, base, sd_grid, sd_k, sd_groups), base, sd_k), sd_out);
    }
  } catch (const Error& e) {
    print_error(std::string(to_string(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace sbl::cli
