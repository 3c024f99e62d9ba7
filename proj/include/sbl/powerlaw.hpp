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

#ifndef SBL_POWERLAW_HPP
#define SBL_POWERLAW_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sbl/interactions.hpp"

namespace sbl {

struct RankFrequency {
  std::int64_t rank;  // 1-based
  double popularity;
};

// Rank-frequency least squares on log-log axes: log r_g = intercept - alpha log g.
// Items with zero popularity are dropped before ranking (`dropped_zeros`).
struct PowerLawFit {
  double alpha = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<RankFrequency> rank_freq;
  std::size_t dropped_zeros = 0;
};

PowerLawFit fit_power_law(std::span<const double> popularity);
PowerLawFit fit_power_law(const PopularityVector& r);

// Each user draws `per_user` distinct items with P(item of rank g) ~ g^-alpha,
// redrawing on duplicates. Item index g-1 has rank g.
InteractionMatrix synth_powerlaw(Index n_users, Index n_items, double alpha, Index per_user,
                                 std::uint64_t seed);

// Zipf popularity modulated by a latent user/item affinity:
//   P(i | u) ~ g_i^-alpha * exp(affinity * <x_u, z_i> / sqrt(latent_dim))
// with x_u, z_i standard normal. affinity == 0 reproduces synth_powerlaw
// exactly. Gives the data a preference signal beyond popularity.
InteractionMatrix synth_latent_powerlaw(Index n_users, Index n_items, double alpha, Index per_user,
                                        Index latent_dim, double affinity, std::uint64_t seed);

}  // namespace sbl

#endif  // SBL_POWERLAW_HPP
