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

#ifndef SBL_SPLIT_HPP
#define SBL_SPLIT_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "sbl/interactions.hpp"

namespace sbl {

enum class Paradigm { common, debiased, uniform_exposure };

std::string to_string(Paradigm paradigm);
Paradigm parse_paradigm(const std::string& name);

struct SplitBundle {
  InteractionMatrix train;
  InteractionMatrix validation;
  InteractionMatrix test;
  Paradigm paradigm = Paradigm::common;
  std::uint64_t seed = 0;
};

// Uniform random partition of the entries. Validation and test sizes are
// floor(fraction * |entries|); train takes the remainder.
SplitBundle split_common(const InteractionMatrix& y, std::uint64_t seed,
                         std::array<double, 3> fractions = {0.70, 0.10, 0.20});

// Every item with at least test_per_item + 1 interactions contributes exactly
// test_per_item random interactions to test, so test popularity is flat over
// eligible items. The rest is split 7:1 into train/validation.
SplitBundle split_debiased(const InteractionMatrix& y, std::uint64_t seed, Index test_per_item = 1);

// Writes train.tsv, valid.tsv, test.tsv (0-based ids of the source matrix)
// and split_meta.json with paradigm, seed, sizes and the token maps.
void write_split(const std::filesystem::path& dir, const SplitBundle& split, const TokenMaps& tokens);

}  // namespace sbl

#endif  // SBL_SPLIT_HPP
