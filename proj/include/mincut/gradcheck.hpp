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

// Central finite-difference verification of tape gradients.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/graph.hpp"
#include "mincut/tape.hpp"

namespace mincut {

// Builds a scalar loss on `tape` from leaf variables holding the inputs.
using LossBuilder = std::function<Var(Tape& tape, std::span<const Var> leaves)>;

struct GradCheckOptions {
  double step = 1e-6;
  // Norms below this are compared in absolute terms.
  double norm_floor = 1e-4;
};

// max over inputs of ||analytic - numeric||_2 / max(||analytic||, ||numeric||, floor)
double gradient_check(const LossBuilder& build, const std::vector<DenseMatrix>& inputs,
                      const GradCheckOptions& options = {});

struct GradCheckResult {
  std::string name;
  double max_relative_error = 0.0;
};

// Every recorded operation plus the composite MinCutPool losses, on random
// inputs in [-1, 1] and random 10-node graphs drawn from `seed`.
std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed,
                                                 const GradCheckOptions& options = {});

// Erdős–Rényi graph with uniform [-1, 1] features; always has an edge.
Graph random_graph(std::size_t n, std::size_t features, double p, std::uint64_t seed);

}  // namespace mincut
