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

#ifndef SBL_ERROR_HPP
#define SBL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbl {

enum class ErrorKind {
  parse,
  empty_input,
  config,
  insufficient_data,
  empty_test,
  bounds,
  divergence,
  degenerate,
  divergent_series,
  size_limit,
  io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; the kind is machine readable and the
// message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sbl

#endif  // SBL_ERROR_HPP
