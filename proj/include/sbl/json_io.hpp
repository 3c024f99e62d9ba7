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

#ifndef SBL_JSON_IO_HPP
#define SBL_JSON_IO_HPP

#include <filesystem>
#include <json.hpp>

#include "sbl/eval.hpp"
#include "sbl/resn.hpp"
#include "sbl/spectral.hpp"
#include "sbl/theory.hpp"
#include "sbl/train.hpp"

namespace sbl {

using Json = nlohmann::json;

Json to_json(const TrainConfig& config);
// Missing keys keep their defaults; the result is validated.
TrainConfig train_config_from_json(const Json& j);

Json to_json(const SpectralReport<double>& rep);
Json to_json(const EpochRecord& rec);
Json to_json(const TrainLog& log);
Json to_json(const BoundReport& rep);
Json to_json(const EvalReport& rep);
Json to_json(const EstimateComparison<double>& cmp);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace sbl

#endif  // SBL_JSON_IO_HPP
