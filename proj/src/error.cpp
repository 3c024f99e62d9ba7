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

#include "sbl/error.hpp"

namespace sbl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::config: return "config";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::empty_test: return "empty_test";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::divergent_series: return "divergent_series";
    case ErrorKind::size_limit: return "size_limit";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace sbl
