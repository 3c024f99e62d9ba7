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

#include "sbl/json_io.hpp"

#include <fstream>
#include <vector>

#include "sbl/error.hpp"

namespace sbl {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const TrainConfig& c) {
  return Json{{"d", c.dim},
              {"loss", to_string(c.loss)},
              {"learning_rate", c.learning_rate},
              {"weight_decay", c.weight_decay},
              {"beta", c.beta},
              {"epochs", c.epochs},
              {"negatives_per_positive", c.negatives_per_positive},
              {"batch_size", c.batch_size},
              {"seed", c.seed},
              {"backbone", to_string(c.backbone)},
              {"lightgcn_layers", c.lightgcn_layers},
              {"log_spectrum_every", c.log_spectrum_every},
              {"full_batch", c.full_batch},
              {"resn_mode", to_string(c.resn_mode)},
              {"init_scale", c.init_scale},
              {"validate_every", c.validate_every}};
}

TrainConfig train_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "training config must be a JSON object");
  TrainConfig c;
  try {
    c.dim = j.value("d", c.dim);
    c.loss = parse_loss(j.value("loss", to_string(c.loss)));
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.beta = j.value("beta", c.beta);
    c.epochs = j.value("epochs", c.epochs);
    c.negatives_per_positive = j.value("negatives_per_positive", c.negatives_per_positive);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
    c.backbone = parse_backbone(j.value("backbone", to_string(c.backbone)));
    c.lightgcn_layers = j.value("lightgcn_layers", c.lightgcn_layers);
    c.log_spectrum_every = j.value("log_spectrum_every", c.log_spectrum_every);
    c.full_batch = j.value("full_batch", c.full_batch);
    c.resn_mode = parse_resn_mode(j.value("resn_mode", to_string(c.resn_mode)));
    c.init_scale = j.value("init_scale", c.init_scale);
    c.validate_every = j.value("validate_every", c.validate_every);
  } catch (const Json::exception& err) {
    throw Error(ErrorKind::parse, std::string("bad training config: ") + err.what());
  }
  c.validate();
  return c;
}

Json to_json(const SpectralReport<double>& rep) {
  return Json{{"sigma1", rep.sigma1},
              {"q1", to_std(rep.q1)},
              {"p1", to_std(rep.p1)},
              {"frobenius_sq", rep.frobenius_sq},
              {"principal_ratio", rep.principal_ratio},
              {"cos_r_q1", rep.cos_r_q1},
              {"singular_values", to_std(rep.singular_values)}};
}

Json to_json(const EpochRecord& rec) {
  Json j{{"epoch", rec.epoch}, {"loss", rec.loss}, {"penalty", rec.penalty}, {"seconds", rec.seconds}};
  if (rec.snapshot) {
    // Singular vectors are omitted per epoch; the final report carries them.
    j["snapshot"] = Json{{"sigma1", rec.snapshot->sigma1},
                         {"principal_ratio", rec.snapshot->principal_ratio},
                         {"cos_r_q1", rec.snapshot->cos_r_q1},
                         {"frobenius_sq", rec.snapshot->frobenius_sq},
                         {"singular_values", to_std(rec.snapshot->singular_values)}};
  }
  if (rec.validation_ndcg) j["validation_ndcg"] = *rec.validation_ndcg;
  return j;
}

Json to_json(const TrainLog& log) {
  Json epochs = Json::array();
  for (const auto& rec : log.epochs) epochs.push_back(to_json(rec));
  return Json{{"epochs", epochs}};
}

Json to_json(const BoundReport& r) {
  return Json{{"alpha", r.alpha},
              {"alpha_r_squared", r.alpha_r_squared},
              {"applicable", r.applicable},
              {"zeta_alpha", r.zeta_alpha},
              {"zeta_2alpha", r.zeta_2alpha},
              {"sigma1", r.sigma1},
              {"r_max", r.r_max},
              {"thm1_general", r.thm1_general},
              {"thm1_simple", optional_json(r.thm1_simple)},
              {"thm1_vacuous", r.thm1_vacuous},
              {"thm1_precondition_violated", r.thm1_precondition_violated},
              {"observed_cos", r.observed_cos},
              {"thm2_x", r.thm2_x},
              {"thm2_bound", r.thm2_bound},
              {"thm2_vacuous", r.thm2_vacuous},
              {"thm2_applicable", r.thm2_applicable},
              {"observed_eta", r.observed_eta},
              {"satisfied",
               Json{{"thm1_general", r.applicable ? Json(r.thm1_general_satisfied) : Json(nullptr)},
                    {"thm1_simple", optional_json(r.thm1_simple_satisfied)},
                    {"thm2", optional_json(r.thm2_satisfied)}}}};
}

Json to_json(const EvalReport& r) {
  return Json{{"ndcg_at_k", r.ndcg_at_k},
              {"k", r.k},
              {"popular_ratio", r.popular_ratio},
              {"group_shares", r.group_shares},
              {"users_evaluated", r.users_evaluated},
              {"short_lists", r.short_lists}};
}

Json to_json(const EstimateComparison<double>& c) {
  return Json{{"exact", c.exact}, {"estimate", c.estimate}, {"relative_gap", c.relative_gap},
              {"rank1_exact", c.rank1_exact}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& err) {
    throw Error(ErrorKind::parse, path.string() + ": " + err.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

}  // namespace sbl
