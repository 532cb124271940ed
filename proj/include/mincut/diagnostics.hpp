// Copyright 2026 The mincut-pool Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

// Process-wide counters for conditions the library survives instead of
// throwing.
namespace mincut::diagnostics {

// Frobenius-norm backward passes evaluated at the zero matrix.
std::uint64_t frobenius_zero_gradients();
void note_frobenius_zero_gradient();

// Coarsening steps whose pooled adjacency had no off-diagonal mass.
std::uint64_t degenerate_pooled_graphs();
void note_degenerate_pooled_graph();

void reset();

}  // namespace mincut::diagnostics
