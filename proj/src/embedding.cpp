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

#include "sbl/embedding.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sbl {

Embeddings init_embeddings(Index n_users, Index n_items, Index dim, std::uint64_t seed, double scale) {
  if (n_users < 1 || n_items < 1 || dim < 1) throw Error(ErrorKind::config, "embedding sizes must be positive");
  const double bound = scale * std::sqrt(6.0 / (2.0 * static_cast<double>(dim)));
  auto rng = make_stream(seed, "init");
  Embeddings e;
  e.users.resize(n_users, dim);
  e.items.resize(n_items, dim);
  for (Index k = 0; k < e.users.size(); ++k) e.users.data()[k] = bound * (2.0 * uniform01(rng) - 1.0);
  for (Index k = 0; k < e.items.size(); ++k) e.items.data()[k] = bound * (2.0 * uniform01(rng) - 1.0);
  return e;
}

Eigen::VectorXd predict_scores(const Embeddings& e, std::span<const Interaction> pairs, Activation activation) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    if (p.user < 0 || p.user >= e.n_users() || p.item < 0 || p.item >= e.n_items()) {
      throw Error(ErrorKind::bounds, "score index (" + std::to_string(p.user) + ", " +
                                         std::to_string(p.item) + ") out of range");
    }
    const double s = e.users.row(p.user).dot(e.items.row(p.item));
    out[static_cast<Eigen::Index>(k)] = activation == Activation::sigmoid ? sigmoid(s) : s;
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'S', 'B', 'L', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw Error(ErrorKind::parse, "truncated checkpoint");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
  return v;
}

void put_block(std::ostream& out, const RowMatrix<double>& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) put_u64(out, std::bit_cast<std::uint64_t>(m.data()[k]));
}

void get_block(std::istream& in, RowMatrix<double>& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = std::bit_cast<double>(get_u64(in));
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Embeddings& e) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(kMagic, 4);
  put_u64(out, static_cast<std::uint64_t>(e.n_users()));
  put_u64(out, static_cast<std::uint64_t>(e.n_items()));
  put_u64(out, static_cast<std::uint64_t>(e.dim()));
  put_block(out, e.users);
  put_block(out, e.items);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Embeddings load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::parse, path.string() + ": not an SBL1 checkpoint");
  const auto n = static_cast<Index>(get_u64(in));
  const auto m = static_cast<Index>(get_u64(in));
  const auto d = static_cast<Index>(get_u64(in));
  if (n < 1 || m < 1 || d < 1 || n > (Index{1} << 32) || m > (Index{1} << 32) || d > (Index{1} << 20)) {
    throw Error(ErrorKind::parse, path.string() + ": implausible checkpoint dimensions");
  }
  Embeddings e;
  e.users.resize(n, d);
  e.items.resize(m, d);
  get_block(in, e.users);
  get_block(in, e.items);
  return e;
}

}  // namespace sbl
