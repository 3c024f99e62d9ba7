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

#ifndef SBL_INTERACTIONS_HPP
#define SBL_INTERACTIONS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sbl {

using Index = std::int64_t;

struct Interaction {
  Index user;
  Index item;

  friend bool operator==(const Interaction&, const Interaction&) = default;
  friend auto operator<=>(const Interaction&, const Interaction&) = default;
};

// Binary implicit-feedback matrix with y_ui = 1 for every stored pair. Both
// row-major (per user) and column-major (per item) adjacency are kept so that
// either side can be walked in O(degree). Immutable once built.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  // Validates ranges and rejects duplicates. Use `from_pairs_dedup` when the
  // input may legitimately repeat pairs.
  InteractionMatrix(Index n_users, Index n_items, std::vector<Interaction> entries);

  // Drops repeated pairs; returns the matrix and the number of dropped pairs.
  static std::pair<InteractionMatrix, std::size_t> from_pairs_dedup(
      Index n_users, Index n_items, std::vector<Interaction> entries);

  Index n_users() const { return n_users_; }
  Index n_items() const { return n_items_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Sorted by (user, item).
  const std::vector<Interaction>& entries() const { return entries_; }

  // Items of user u, ascending.
  std::span<const Index> items_of(Index u) const {
    return {row_items_.data() + row_ptr_[u], row_items_.data() + row_ptr_[u + 1]};
  }
  // Users of item i, ascending.
  std::span<const Index> users_of(Index i) const {
    return {col_users_.data() + col_ptr_[i], col_users_.data() + col_ptr_[i + 1]};
  }
  Index user_degree(Index u) const { return row_ptr_[u + 1] - row_ptr_[u]; }
  Index item_degree(Index i) const { return col_ptr_[i + 1] - col_ptr_[i]; }

  bool contains(Index u, Index i) const;

 private:
  Index n_users_ = 0;
  Index n_items_ = 0;
  std::vector<Interaction> entries_;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> row_items_;
  std::vector<Index> col_ptr_{0};
  std::vector<Index> col_users_;
};

// r_i = number of users who interacted with item i.
struct PopularityVector {
  std::vector<std::int64_t> values;
  std::int64_t total = 0;

  std::int64_t max() const;
  // Index of the most popular item; ties resolve to the smallest index.
  Index argmax() const;

  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> as_vector() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> r(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) r[static_cast<Eigen::Index>(i)] = Scalar(values[i]);
    return r;
  }
};

PopularityVector popularity(const InteractionMatrix& y);

enum class PairFormat { tsv_pairs, csv_pairs };

PairFormat parse_pair_format(const std::string& name);

// Tokens in order of first appearance; position == assigned index.
struct TokenMaps {
  std::vector<std::string> users;
  std::vector<std::string> items;
};

struct LoadedInteractions {
  InteractionMatrix matrix;
  TokenMaps tokens;
  std::size_t duplicates = 0;
};

// Reads `user<sep>item` lines, reindexing tokens to 0-based ids in order of
// first appearance. Lines starting with '#' and blank lines are skipped.
LoadedInteractions load_interactions(const std::filesystem::path& path, PairFormat format);

// Reads a file whose tokens already are 0-based integer ids (as written by
// `write_interactions`). Dimensions default to max id + 1 when not given.
LoadedInteractions load_indexed_interactions(const std::filesystem::path& path, PairFormat format,
                                             Index n_users = -1, Index n_items = -1);

void write_interactions(const std::filesystem::path& path, const InteractionMatrix& y,
                        PairFormat format = PairFormat::tsv_pairs);

}  // namespace sbl

#endif  // SBL_INTERACTIONS_HPP
