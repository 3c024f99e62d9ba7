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

#include "sbl/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "sbl/error.hpp"
#include "sbl/random.hpp"

namespace sbl {

PowerLawFit fit_power_law(std::span<const double> popularity) {
  PowerLawFit fit;
  std::vector<double> sorted;
  sorted.reserve(popularity.size());
  for (double v : popularity) {
    if (v > 0.0) {
      sorted.push_back(v);
    } else {
      ++fit.dropped_zeros;
    }
  }
  if (sorted.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "power-law fit needs at least 2 items with positive popularity");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  const auto count = static_cast<double>(sorted.size());
  double mean_x = 0.0, mean_y = 0.0;
  fit.rank_freq.reserve(sorted.size());
  for (std::size_t g = 0; g < sorted.size(); ++g) {
    fit.rank_freq.push_back({static_cast<std::int64_t>(g + 1), sorted[g]});
    mean_x += std::log(static_cast<double>(g + 1));
    mean_y += std::log(sorted[g]);
  }
  mean_x /= count;
  mean_y /= count;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t g = 0; g < sorted.size(); ++g) {
    const double dx = std::log(static_cast<double>(g + 1)) - mean_x;
    const double dy = std::log(sorted[g]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  fit.alpha = -slope;
  if (fit.alpha == 0.0) fit.alpha = 0.0;  // no negative zero in reports
  fit.intercept = mean_y - slope * mean_x;

  // A perfectly flat sequence has no variance to explain; it is fit exactly.
  double ss_res = 0.0;
  for (std::size_t g = 0; g < sorted.size(); ++g) {
    const double pred = fit.intercept + slope * std::log(static_cast<double>(g + 1));
    const double e = std::log(sorted[g]) - pred;
    ss_res += e * e;
  }
  fit.r_squared = syy <= 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

PowerLawFit fit_power_law(const PopularityVector& r) {
  std::vector<double> values(r.values.begin(), r.values.end());
  return fit_power_law(values);
}

namespace {

// Draws `count` distinct indices from an unnormalised weight table. Plain
// redraw-on-duplicate, switching to an exact draw from the remaining mass when
// the already-taken items hold most of it (same distribution either way).
void draw_distinct(const std::vector<double>& cdf, const std::vector<double>& weights,
                   Index count, Rng& rng, std::vector<Index>& out) {
  const auto m = static_cast<Index>(weights.size());
  const double total = cdf.back();
  out.clear();
  std::vector<char> taken(static_cast<std::size_t>(m), 0);
  double taken_mass = 0.0;
  while (static_cast<Index>(out.size()) < count) {
    if (taken_mass > 0.5 * total) {
      double remaining = 0.0;
      for (Index i = 0; i < m; ++i) {
        if (!taken[i]) remaining += weights[i];
      }
      double target = uniform01(rng) * remaining;
      Index pick = -1;
      for (Index i = 0; i < m; ++i) {
        if (taken[i]) continue;
        pick = i;
        target -= weights[i];
        if (target < 0.0) break;
      }
      taken[pick] = 1;
      taken_mass += weights[pick];
      out.push_back(pick);
      continue;
    }
    const double target = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    Index pick = std::min<Index>(static_cast<Index>(it - cdf.begin()), m - 1);
    if (taken[pick]) continue;
    taken[pick] = 1;
    taken_mass += weights[pick];
    out.push_back(pick);
  }
}

void check_synth_args(Index n_users, Index n_items, double alpha, Index per_user) {
  if (n_users < 1 || n_items < 1) throw Error(ErrorKind::config, "synth needs at least one user and item");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::config, "alpha must be non-negative");
  if (per_user < 1 || per_user > n_items) {
    throw Error(ErrorKind::config, "interactions per user must be in [1, items]");
  }
}

std::vector<double> zipf_weights(Index n_items, double alpha) {
  std::vector<double> w(static_cast<std::size_t>(n_items));
  for (Index g = 0; g < n_items; ++g) w[g] = std::pow(static_cast<double>(g + 1), -alpha);
  return w;
}

}  // namespace

InteractionMatrix synth_powerlaw(Index n_users, Index n_items, double alpha, Index per_user,
                                 std::uint64_t seed) {
  check_synth_args(n_users, n_items, alpha, per_user);
  const auto weights = zipf_weights(n_items, alpha);
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());

  auto rng = make_stream(seed, "synth");
  std::vector<Interaction> entries;
  entries.reserve(static_cast<std::size_t>(n_users * per_user));
  std::vector<Index> picks;
  for (Index u = 0; u < n_users; ++u) {
    draw_distinct(cdf, weights, per_user, rng, picks);
    for (Index i : picks) entries.push_back({u, i});
  }
  return InteractionMatrix(n_users, n_items, std::move(entries));
}

InteractionMatrix synth_latent_powerlaw(Index n_users, Index n_items, double alpha, Index per_user,
                                        Index latent_dim, double affinity, std::uint64_t seed) {
  if (affinity == 0.0) return synth_powerlaw(n_users, n_items, alpha, per_user, seed);
  check_synth_args(n_users, n_items, alpha, per_user);
  if (latent_dim < 1) throw Error(ErrorKind::config, "latent dimension must be positive");

  auto latent_rng = make_stream(seed, "synth-latent");
  // Box-Muller keeps the normals identical across standard libraries.
  auto normal = [&latent_rng]() {
    const double u1 = 1.0 - uniform01(latent_rng);
    const double u2 = uniform01(latent_rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  };
  Eigen::MatrixXd users(latent_dim, n_users), items(latent_dim, n_items);
  for (Index u = 0; u < n_users; ++u)
    for (Index k = 0; k < latent_dim; ++k) users(k, u) = normal();
  for (Index i = 0; i < n_items; ++i)
    for (Index k = 0; k < latent_dim; ++k) items(k, i) = normal();

  const auto base = zipf_weights(n_items, alpha);
  const double scale = affinity / std::sqrt(static_cast<double>(latent_dim));
  auto rng = make_stream(seed, "synth");
  std::vector<Interaction> entries;
  entries.reserve(static_cast<std::size_t>(n_users * per_user));
  std::vector<double> weights(base.size()), cdf(base.size());
  std::vector<Index> picks;
  for (Index u = 0; u < n_users; ++u) {
    const Eigen::VectorXd logits = scale * (items.transpose() * users.col(u));
    const double shift = logits.maxCoeff();
    for (Index i = 0; i < n_items; ++i) weights[i] = base[i] * std::exp(logits[i] - shift);
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    draw_distinct(cdf, weights, per_user, rng, picks);
    for (Index i : picks) entries.push_back({u, i});
  }
  return InteractionMatrix(n_users, n_items, std::move(entries));
}

}  // namespace sbl
