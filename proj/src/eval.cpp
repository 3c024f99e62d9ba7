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

#include "sbl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "sbl/error.hpp"

namespace sbl {

int worker_threads() {
  if (const char* env = std::getenv("SBL_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::config, "SBL_THREADS must be a positive integer");
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

namespace {

void recommend_range(const Embeddings& e, const InteractionMatrix& train, Index k, Index begin, Index end,
                     std::vector<std::vector<Index>>& lists) {
  const Index m = e.n_items();
  Eigen::VectorXd scores(m);
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  std::vector<Index> candidates;
  candidates.reserve(static_cast<std::size_t>(m));
  for (Index u = begin; u < end; ++u) {
    scores.noalias() = e.items * e.users.row(u).transpose();
    const auto own = train.items_of(u);
    for (Index i : own) seen[static_cast<std::size_t>(i)] = 1;
    candidates.clear();
    for (Index i = 0; i < m; ++i) {
      if (!seen[static_cast<std::size_t>(i)]) candidates.push_back(i);
    }
    for (Index i : own) seen[static_cast<std::size_t>(i)] = 0;
    auto better = [&scores](Index a, Index b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); };
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                      better);
    lists[static_cast<std::size_t>(u)].assign(candidates.begin(),
                                              candidates.begin() + static_cast<std::ptrdiff_t>(take));
  }
}

}  // namespace

Recommendations topk_recommend(const Embeddings& e, const InteractionMatrix& train, Index k) {
  if (k < 1) throw Error(ErrorKind::config, "k must be at least 1");
  if (k > e.n_items()) throw Error(ErrorKind::config, "k exceeds the number of items");
  if (train.n_users() != e.n_users() || train.n_items() != e.n_items()) {
    throw Error(ErrorKind::config, "embeddings and training matrix disagree on dimensions");
  }
  Recommendations out;
  out.k = k;
  const Index n = e.n_users();
  out.lists.resize(static_cast<std::size_t>(n));
  const Index workers = std::clamp<Index>(worker_threads(), 1, std::max<Index>(1, n / 64));
  if (workers == 1) {
    recommend_range(e, train, k, 0, n, out.lists);
  } else {
    std::vector<std::thread> pool;
    const Index chunk = (n + workers - 1) / workers;
    for (Index w = 0; w < workers; ++w) {
      const Index begin = w * chunk;
      const Index end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] { recommend_range(e, train, k, begin, end, out.lists); });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& list : out.lists) {
    if (static_cast<Index>(list.size()) < k) ++out.short_lists;
  }
  return out;
}

NdcgResult ndcg_at_k(const Recommendations& recs, const InteractionMatrix& test, Index k) {
  if (k < 1) throw Error(ErrorKind::config, "k must be at least 1");
  if (static_cast<Index>(recs.lists.size()) != test.n_users()) {
    throw Error(ErrorKind::config, "recommendations and test matrix disagree on user count");
  }
  std::vector<double> discount(static_cast<std::size_t>(k));
  for (Index rho = 0; rho < k; ++rho) discount[static_cast<std::size_t>(rho)] = 1.0 / std::log2(rho + 2.0);
  NdcgResult out;
  double total = 0.0;
  for (Index u = 0; u < test.n_users(); ++u) {
    const auto relevant = test.items_of(u);
    if (relevant.empty()) continue;
    const auto& list = recs.lists[static_cast<std::size_t>(u)];
    double dcg = 0.0;
    const auto depth = std::min<std::size_t>(list.size(), static_cast<std::size_t>(k));
    for (std::size_t rho = 0; rho < depth; ++rho) {
      if (std::binary_search(relevant.begin(), relevant.end(), list[rho])) dcg += discount[rho];
    }
    double idcg = 0.0;
    const auto ideal = std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
    for (std::size_t rho = 0; rho < ideal; ++rho) idcg += discount[rho];
    total += dcg / idcg;
    ++out.users_evaluated;
  }
  if (out.users_evaluated == 0) throw Error(ErrorKind::empty_test, "no user has a test interaction");
  out.ndcg = total / static_cast<double>(out.users_evaluated);
  return out;
}

PopularityGroups group_by_popularity(const PopularityVector& r, int groups) {
  if (groups < 2) throw Error(ErrorKind::config, "at least two popularity groups are required");
  if (r.total <= 0) throw Error(ErrorKind::insufficient_data, "total popularity must be positive");
  const auto nonzero = std::count_if(r.values.begin(), r.values.end(), [](std::int64_t v) { return v > 0; });
  if (nonzero < groups) throw Error(ErrorKind::insufficient_data, "fewer popular items than groups");
  std::vector<Index> order(r.values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&r](Index a, Index b) {
    return r.values[static_cast<std::size_t>(a)] > r.values[static_cast<std::size_t>(b)];
  });
  PopularityGroups out;
  out.groups = groups;
  out.group_of.assign(r.values.size(), groups - 1);
  out.mass.assign(static_cast<std::size_t>(groups), 0.0);
  const double target = static_cast<double>(r.total) / groups;
  int g = 0;
  for (Index item : order) {
    const auto pop = static_cast<double>(r.values[static_cast<std::size_t>(item)]);
    out.group_of[static_cast<std::size_t>(item)] = g;
    out.mass[static_cast<std::size_t>(g)] += pop;
    if (g < groups - 1 && out.mass[static_cast<std::size_t>(g)] >= target) ++g;
  }
  return out;
}

ExposureShares popular_ratio_topk(const Recommendations& recs, const PopularityGroups& groups) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(groups.groups), 0);
  std::int64_t slots = 0;
  for (const auto& list : recs.lists) {
    for (Index i : list) {
      if (i < 0 || i >= static_cast<Index>(groups.group_of.size())) {
        throw Error(ErrorKind::bounds, "recommended item has no popularity group");
      }
      ++counts[static_cast<std::size_t>(groups.group_of[static_cast<std::size_t>(i)])];
      ++slots;
    }
  }
  ExposureShares out;
  out.group_shares.assign(counts.size(), 0.0);
  if (slots == 0) return out;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    out.group_shares[g] = static_cast<double>(counts[g]) / static_cast<double>(slots);
  }
  out.popular_ratio = out.group_shares[0];
  return out;
}

EvalReport evaluate(const Embeddings& e, const InteractionMatrix& train, const InteractionMatrix& test, Index k,
                    int groups) {
  if (test.n_users() != train.n_users() || test.n_items() != train.n_items()) {
    throw Error(ErrorKind::config, "train and test matrices disagree on dimensions");
  }
  if (test.empty()) throw Error(ErrorKind::empty_test, "test set is empty");
  const auto recs = topk_recommend(e, train, k);
  const auto nd = ndcg_at_k(recs, test, k);
  const auto shares = popular_ratio_topk(recs, group_by_popularity(popularity(train), groups));
  EvalReport rep;
  rep.ndcg_at_k = nd.ndcg;
  rep.k = k;
  rep.popular_ratio = shares.popular_ratio;
  rep.group_shares = shares.group_shares;
  rep.users_evaluated = nd.users_evaluated;
  rep.short_lists = recs.short_lists;
  return rep;
}

}  // namespace sbl
