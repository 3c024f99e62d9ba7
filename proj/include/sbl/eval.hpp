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

#ifndef SBL_EVAL_HPP
#define SBL_EVAL_HPP

#include <Eigen/Core>
#include <vector>

#include "sbl/embedding.hpp"
#include "sbl/interactions.hpp"

namespace sbl {

// Worker count from SBL_THREADS (>= 1), else the hardware concurrency.
int worker_threads();

struct Recommendations {
  Index k = 0;
  std::vector<std::vector<Index>> lists;  // per user, best first
  // Users with fewer than k unseen items; their lists are shorter.
  Index short_lists = 0;
};

// Top-k unseen items per user by <u_u, v_i>; ties go to the smaller item
// index. Users are split across worker threads; the output does not depend on
// the thread count.
Recommendations topk_recommend(const Embeddings& e, const InteractionMatrix& train, Index k);

struct NdcgResult {
  double ndcg = 0.0;
  Index users_evaluated = 0;
};

// Mean NDCG@k with binary relevance over users that have at least one test
// item; IDCG stops at min(k, #test items).
NdcgResult ndcg_at_k(const Recommendations& recs, const InteractionMatrix& test, Index k);

struct PopularityGroups {
  std::vector<int> group_of;  // per item; 0 is the most popular group
  int groups = 0;
  std::vector<double> mass;   // popularity per group
};

// Sort items by popularity (descending, smaller index first on ties) and close
// a group as soon as its own mass reaches total / G; the last group takes the
// remainder. Groups left without items stay empty.
PopularityGroups group_by_popularity(const PopularityVector& r, int groups);

struct ExposureShares {
  double popular_ratio = 0.0;
  std::vector<double> group_shares;
};

ExposureShares popular_ratio_topk(const Recommendations& recs, const PopularityGroups& groups);

struct EvalReport {
  double ndcg_at_k = 0.0;
  Index k = 0;
  double popular_ratio = 0.0;
  std::vector<double> group_shares;
  Index users_evaluated = 0;
  Index short_lists = 0;
};

// Groups come from the training popularity.
EvalReport evaluate(const Embeddings& e, const InteractionMatrix& train, const InteractionMatrix& test, Index k,
                    int groups = 5);

}  // namespace sbl

#endif  // SBL_EVAL_HPP
