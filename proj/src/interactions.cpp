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

#include "sbl/interactions.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "sbl/error.hpp"

namespace sbl {

namespace {

void build_adjacency(Index n, Index m, const std::vector<Interaction>& entries,
                     std::vector<Index>& row_ptr, std::vector<Index>& row_items,
                     std::vector<Index>& col_ptr, std::vector<Index>& col_users) {
  row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  col_ptr.assign(static_cast<std::size_t>(m) + 1, 0);
  for (const auto& e : entries) {
    ++row_ptr[e.user + 1];
    ++col_ptr[e.item + 1];
  }
  for (Index u = 0; u < n; ++u) row_ptr[u + 1] += row_ptr[u];
  for (Index i = 0; i < m; ++i) col_ptr[i + 1] += col_ptr[i];

  // Entries are sorted by (user, item), so both fills come out ascending.
  row_items.resize(entries.size());
  col_users.resize(entries.size());
  std::vector<Index> col_fill(col_ptr.begin(), col_ptr.end() - 1);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    row_items[k] = entries[k].item;
    col_users[col_fill[entries[k].item]++] = entries[k].user;
  }
}

void check_ranges(Index n, Index m, const std::vector<Interaction>& entries) {
  if (n < 0 || m < 0) throw Error(ErrorKind::config, "negative matrix dimension");
  for (const auto& e : entries) {
    if (e.user < 0 || e.user >= n || e.item < 0 || e.item >= m) {
      throw Error(ErrorKind::bounds, "interaction (" + std::to_string(e.user) + ", " +
                                         std::to_string(e.item) + ") outside " +
                                         std::to_string(n) + "x" + std::to_string(m));
    }
  }
}

char separator(PairFormat format) { return format == PairFormat::tsv_pairs ? '\t' : ','; }

// Splits a data line into exactly two tokens. Surrounding whitespace is
// trimmed; a CR from CRLF files is dropped.
bool split_pair(std::string_view line, char sep, std::string_view& a, std::string_view& b) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  line = trim(line);
  const auto pos = line.find(sep);
  if (pos == std::string_view::npos) return false;
  a = trim(line.substr(0, pos));
  b = trim(line.substr(pos + 1));
  if (a.empty() || b.empty()) return false;
  if (b.find(sep) != std::string_view::npos) return false;
  return true;
}

template <typename OnPair>
void read_pairs(const std::filesystem::path& path, PairFormat format, OnPair&& on_pair) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  const char sep = separator(format);
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (view.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (view.front() == '#') continue;
    std::string_view a, b;
    if (!split_pair(view, sep, a, b)) {
      throw Error(ErrorKind::parse, path.string() + ": line " + std::to_string(line_no) +
                                        ": expected exactly two tokens");
    }
    on_pair(a, b, line_no);
    ++data_lines;
  }
  if (data_lines == 0) throw Error(ErrorKind::empty_input, path.string() + ": no interactions");
}

}  // namespace

InteractionMatrix::InteractionMatrix(Index n_users, Index n_items, std::vector<Interaction> entries)
    : n_users_(n_users), n_items_(n_items), entries_(std::move(entries)) {
  check_ranges(n_users_, n_items_, entries_);
  std::sort(entries_.begin(), entries_.end());
  if (std::adjacent_find(entries_.begin(), entries_.end()) != entries_.end()) {
    throw Error(ErrorKind::config, "duplicate interaction pair");
  }
  build_adjacency(n_users_, n_items_, entries_, row_ptr_, row_items_, col_ptr_, col_users_);
}

std::pair<InteractionMatrix, std::size_t> InteractionMatrix::from_pairs_dedup(
    Index n_users, Index n_items, std::vector<Interaction> entries) {
  std::sort(entries.begin(), entries.end());
  const auto before = entries.size();
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  const auto dropped = before - entries.size();
  return {InteractionMatrix(n_users, n_items, std::move(entries)), dropped};
}

bool InteractionMatrix::contains(Index u, Index i) const {
  const auto items = items_of(u);
  return std::binary_search(items.begin(), items.end(), i);
}

std::int64_t PopularityVector::max() const {
  return values.empty() ? 0 : *std::max_element(values.begin(), values.end());
}

Index PopularityVector::argmax() const {
  // max_element returns the first maximum.
  return static_cast<Index>(std::max_element(values.begin(), values.end()) - values.begin());
}

PopularityVector popularity(const InteractionMatrix& y) {
  PopularityVector r;
  r.values.resize(static_cast<std::size_t>(y.n_items()));
  for (Index i = 0; i < y.n_items(); ++i) r.values[i] = y.item_degree(i);
  r.total = static_cast<std::int64_t>(y.nnz());
  return r;
}

PairFormat parse_pair_format(const std::string& name) {
  if (name == "tsv" || name == "tsv_pairs") return PairFormat::tsv_pairs;
  if (name == "csv" || name == "csv_pairs") return PairFormat::csv_pairs;
  throw Error(ErrorKind::config, "unknown pair format '" + name + "'");
}

LoadedInteractions load_interactions(const std::filesystem::path& path, PairFormat format) {
  std::unordered_map<std::string, Index> user_ids, item_ids;
  LoadedInteractions out;
  std::vector<Interaction> pairs;
  auto intern = [](std::unordered_map<std::string, Index>& ids, std::vector<std::string>& tokens,
                   std::string_view tok) {
    auto [it, inserted] = ids.try_emplace(std::string(tok), static_cast<Index>(tokens.size()));
    if (inserted) tokens.emplace_back(tok);
    return it->second;
  };
  read_pairs(path, format, [&](std::string_view a, std::string_view b, std::size_t) {
    const Index u = intern(user_ids, out.tokens.users, a);
    const Index i = intern(item_ids, out.tokens.items, b);
    pairs.push_back({u, i});
  });
  auto [matrix, dropped] = InteractionMatrix::from_pairs_dedup(
      static_cast<Index>(out.tokens.users.size()), static_cast<Index>(out.tokens.items.size()),
      std::move(pairs));
  out.matrix = std::move(matrix);
  out.duplicates = dropped;
  return out;
}

LoadedInteractions load_indexed_interactions(const std::filesystem::path& path, PairFormat format,
                                             Index n_users, Index n_items) {
  std::vector<Interaction> pairs;
  Index max_user = -1, max_item = -1;
  auto parse_id = [&](std::string_view tok, std::size_t line_no) {
    Index v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
      throw Error(ErrorKind::parse, path.string() + ": line " + std::to_string(line_no) +
                                        ": expected a non-negative integer id, got '" +
                                        std::string(tok) + "'");
    }
    return v;
  };
  read_pairs(path, format, [&](std::string_view a, std::string_view b, std::size_t line_no) {
    const Index u = parse_id(a, line_no);
    const Index i = parse_id(b, line_no);
    max_user = std::max(max_user, u);
    max_item = std::max(max_item, i);
    pairs.push_back({u, i});
  });
  if (n_users < 0) n_users = max_user + 1;
  if (n_items < 0) n_items = max_item + 1;
  LoadedInteractions out;
  auto [matrix, dropped] = InteractionMatrix::from_pairs_dedup(n_users, n_items, std::move(pairs));
  out.matrix = std::move(matrix);
  out.duplicates = dropped;
  out.tokens.users.reserve(static_cast<std::size_t>(n_users));
  for (Index u = 0; u < n_users; ++u) out.tokens.users.push_back(std::to_string(u));
  out.tokens.items.reserve(static_cast<std::size_t>(n_items));
  for (Index i = 0; i < n_items; ++i) out.tokens.items.push_back(std::to_string(i));
  return out;
}

void write_interactions(const std::filesystem::path& path, const InteractionMatrix& y,
                        PairFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  const char sep = separator(format);
  std::string buf;
  for (const auto& e : y.entries()) {
    buf += std::to_string(e.user);
    buf += sep;
    buf += std::to_string(e.item);
    buf += '\n';
    if (buf.size() > (1 << 16)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace sbl
