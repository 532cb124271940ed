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

#include "mincut/diagnostics.hpp"

#include <atomic>

namespace mincut::diagnostics {

namespace {
std::atomic<std::uint64_t> frobenius_zero{0};
std::atomic<std::uint64_t> degenerate_pooled{0};
}  // namespace

std::uint64_t frobenius_zero_gradients() { return frobenius_zero.load(); }
void note_frobenius_zero_gradient() { frobenius_zero.fetch_add(1); }

std::uint64_t degenerate_pooled_graphs() { return degenerate_pooled.load(); }
void note_degenerate_pooled_graph() { degenerate_pooled.fetch_add(1); }

void reset() {
  frobenius_zero.store(0);
  degenerate_pooled.store(0);
}

}  // namespace mincut::diagnostics
