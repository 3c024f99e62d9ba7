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

#ifndef SBL_LIGHTGCN_HPP
#define SBL_LIGHTGCN_HPP

#include "sbl/embedding.hpp"
#include "sbl/interactions.hpp"

namespace sbl {

// Symmetric-normalised bipartite propagation averaged over layers 0..L:
//   U(l+1) = Du^-1/2 Y Di^-1/2 V(l),  V(l+1) = Di^-1/2 Y^T Du^-1/2 U(l).
// Rows with no interactions keep their layer-0 embedding in every layer.
//
// The map is linear and self-adjoint on the stacked [U; V] space, so the same
// call also carries gradients from propagated back to base embeddings.
Embeddings lightgcn_propagate(const InteractionMatrix& y, const Embeddings& base, int layers);

}  // namespace sbl

#endif  // SBL_LIGHTGCN_HPP
