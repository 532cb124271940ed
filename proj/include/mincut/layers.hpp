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

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/sparse_matrix.hpp"
#include "mincut/tape.hpp"

namespace mincut {

enum class Activation { kLinear, kRelu, kElu };

std::string to_string(Activation a);
// Accepts "linear", "relu", "elu"; throws ParameterError otherwise.
Activation activation_from_string(const std::string& name);

Var apply_activation(const Var& x, Activation a);

// Message-passing layer: act(Ã X Θ_m + X Θ_s).
struct MpLayerParams {
  DenseMatrix theta_m;  // mixing weights, F_in x F_out
  DenseMatrix theta_s;  // skip weights, F_in x F_out
  Activation activation = Activation::kRelu;

  std::size_t in_width() const { return theta_m.rows(); }
  std::size_t out_width() const { return theta_m.cols(); }
};

struct DenseLayerParams {
  DenseMatrix weight;  // in x out
  DenseMatrix bias;    // 1 x out
};

// Glorot-uniform weights, zero biases.
DenseMatrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);
MpLayerParams make_mp_layer(std::size_t in, std::size_t out, Activation a, std::mt19937_64& rng);
DenseLayerParams make_dense_layer(std::size_t in, std::size_t out, std::mt19937_64& rng);

// Parameters recorded on a tape.
struct BoundMpLayer {
  Var theta_m;
  Var theta_s;
  Activation activation = Activation::kRelu;
};

struct BoundDenseLayer {
  Var weight;
  Var bias;
};

// Records parameters as tape variables and remembers the order, which must
// match the order of the corresponding parameters() list.
class ParameterBinder {
 public:
  explicit ParameterBinder(Tape& tape) : tape_(&tape) {}

  Var bind(const DenseMatrix& m);
  BoundMpLayer bind(const MpLayerParams& p);
  BoundDenseLayer bind(const DenseLayerParams& p);

  Tape& tape() const { return *tape_; }
  const std::vector<Var>& variables() const { return vars_; }

 private:
  Tape* tape_;
  std::vector<Var> vars_;
};

void append_parameters(MpLayerParams& p, std::vector<DenseMatrix*>& out);
void append_parameters(DenseLayerParams& p, std::vector<DenseMatrix*>& out);

// Sparse-adjacency message passing. Computes Ã (X Θ_m), which equals
// (Ã X) Θ_m and is cheaper when F_in > F_out.
Var mp_forward(const Var& x, const SparseMatrix& a_tilde, const BoundMpLayer& p);
// Same layer over a dense adjacency carried on the tape (pooled graphs).
Var mp_forward(const Var& x, const Var& a_tilde, const BoundMpLayer& p);

Var dense_forward(const Var& x, const BoundDenseLayer& p, Activation a = Activation::kLinear);

}  // namespace mincut
