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

#include "sbl/split.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "sbl/error.hpp"
#include "sbl/random.hpp"

namespace sbl {

std::string to_string(Paradigm paradigm) {
  switch (paradigm) {
    case Paradigm::common: return "common";
    case Paradigm::debiased: return "debiased";
    case Paradigm::uniform_exposure: return "uniform_exposure";
  }
  return "common";
}

Paradigm parse_paradigm(const std::string& name) {
  if (name == "common") return Paradigm::common;
  if (name == "debiased") return Paradigm::debiased;
  if (name == "uniform_exposure" || name == "uniform-exposure") return Paradigm::uniform_exposure;
  throw Error(ErrorKind::config, "unknown paradigm '" + name + "'");
}

namespace {

std::size_t share(double fraction, std::size_t total) {
  // The epsilon keeps exact products such as 0.1 * 100 from rounding down.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total) + 1e-9));
}

}  // namespace

SplitBundle split_common(const InteractionMatrix& y, std::uint64_t seed, std::array<double, 3> fractions) {
  const double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9 || fractions[0] < 0 || fractions[1] < 0 || fractions[2] < 0) {
    throw Error(ErrorKind::config, "split fractions must be non-negative and sum to 1");
  }
  if (y.nnz() < 10) throw Error(ErrorKind::insufficient_data, "common split needs at least 10 interactions");

  auto entries = y.entries();
  auto rng = make_stream(seed, "splits");
  shuffle(entries.begin(), entries.end(), rng);

  const std::size_t n_valid = share(fractions[1], entries.size());
  const std::size_t n_test = share(fractions[2], entries.size());
  const std::size_t n_train = entries.size() - n_valid - n_test;

  auto first = entries.begin();
  std::vector<Interaction> train(first, first + static_cast<std::ptrdiff_t>(n_train));
  std::vector<Interaction> valid(first + static_cast<std::ptrdiff_t>(n_train),
                                 first + static_cast<std::ptrdiff_t>(n_train + n_valid));
  std::vector<Interaction> test(first + static_cast<std::ptrdiff_t>(n_train + n_valid), entries.end());

  SplitBundle out;
  out.train = InteractionMatrix(y.n_users(), y.n_items(), std::move(train));
  out.validation = InteractionMatrix(y.n_users(), y.n_items(), std::move(valid));
  out.test = InteractionMatrix(y.n_users(), y.n_items(), std::move(test));
  out.paradigm = Paradigm::common;
  out.seed = seed;
  return out;
}

SplitBundle split_debiased(const InteractionMatrix& y, std::uint64_t seed, Index test_per_item) {
  if (test_per_item < 1) throw Error(ErrorKind::config, "test_per_item must be at least 1");
  auto rng = make_stream(seed, "splits");

  std::vector<Interaction> test, rest;
  rest.reserve(y.nnz());
  std::vector<Index> users;
  for (Index i = 0; i < y.n_items(); ++i) {
    const auto col = y.users_of(i);
    users.assign(col.begin(), col.end());
    if (static_cast<Index>(users.size()) >= test_per_item + 1) {
      shuffle(users.begin(), users.end(), rng);
      for (Index k = 0; k < static_cast<Index>(users.size()); ++k) {
        (k < test_per_item ? test : rest).push_back({users[k], i});
      }
    } else {
      for (Index u : users) rest.push_back({u, i});
    }
  }
  if (test.empty()) throw Error(ErrorKind::empty_test, "no item has enough interactions for a debiased test set");

  shuffle(rest.begin(), rest.end(), rng);
  const std::size_t n_valid = rest.size() / 8;
  const std::size_t n_train = rest.size() - n_valid;
  std::vector<Interaction> train(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<Interaction> valid(rest.begin() + static_cast<std::ptrdiff_t>(n_train), rest.end());

  SplitBundle out;
  out.train = InteractionMatrix(y.n_users(), y.n_items(), std::move(train));
  out.validation = InteractionMatrix(y.n_users(), y.n_items(), std::move(valid));
  out.test = InteractionMatrix(y.n_users(), y.n_items(), std::move(test));
  out.paradigm = Paradigm::debiased;
  out.seed = seed;
  return out;
}

void write_split(const std::filesystem::path& dir, const SplitBundle& split, const TokenMaps& tokens) {
  std::filesystem::create_directories(dir);
  write_interactions(dir / "train.tsv", split.train);
  write_interactions(dir / "valid.tsv", split.validation);
  write_interactions(dir / "test.tsv", split.test);

  nlohmann::json meta;
  meta["paradigm"] = to_string(split.paradigm);
  meta["seed"] = split.seed;
  meta["n_users"] = split.train.n_users();
  meta["n_items"] = split.train.n_items();
  meta["sizes"] = {{"train", split.train.nnz()},
                   {"validation", split.validation.nnz()},
                   {"test", split.test.nnz()}};
  meta["user_tokens"] = tokens.users;
  meta["item_tokens"] = tokens.items;
  std::ofstream out(dir / "split_meta.json");
  if (!out) throw Error(ErrorKind::io, "cannot write " + (dir / "split_meta.json").string());
  out << meta.dump(2) << '\n';
}

}  // namespace sbl
