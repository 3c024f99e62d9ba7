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

#ifndef SBL_CLI_HPP
#define SBL_CLI_HPP

namespace sbl::cli {

// Exit codes: 0 success, 1 runtime failure (one-line JSON error on stderr),
// 2 bad command line (usage on stderr).
int run(int argc, char** argv);

}  // namespace sbl::cli

#endif  // SBL_CLI_HPP
