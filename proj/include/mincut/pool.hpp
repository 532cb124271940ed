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

// MinCutPool: assignment head, minCUT/orthogonality losses, coarsening and
// unpooling.
//
// Every operation comes in two forms. The Var form records onto a Tape and
// is what training uses; the value form runs on plain matrices and returns
// plain results.

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/graph.hpp"
#include "mincut/layers.hpp"
#include "mincut/tape.hpp"

namespace mincut {

struct MlpParams {
  std::vector<DenseLayerParams> layers;  // last layer has width k
  Activation hidden_activation = Activation::kLinear;
};

struct PoolModel {
  std::vector<MpLayerParams> gnn;
  MlpParams mlp;
  std::size_t k = 0;
  double temperature = 1.0;

  // Throws ShapeError if layer widths do not chain or the head is not k wide.
  void validate() const;
  std::size_t in_features() const;
};

struct PoolModelConfig {
  std::size_t in_features = 0;
  std::size_t k = 2;
  std::vector<std::size_t> gnn_widths{16};
  Activation gnn_activation = Activation::kElu;
  std::vector<std::size_t> mlp_hidden{16};
  Activation mlp_hidden_activation = Activation::kLinear;
  double temperature = 1.0;
};

// Glorot-initialized model.
PoolModel make_pool_model(const PoolModelConfig& config, std::mt19937_64& rng);

// Parameter matrices in binding order.
std::vector<DenseMatrix*> parameters(PoolModel& model);

struct BoundPoolModel {
  std::vector<BoundMpLayer> gnn;
  std::vector<BoundDenseLayer> mlp;
  Activation hidden_activation = Activation::kLinear;
  std::size_t k = 0;
  double temperature = 1.0;
};

BoundPoolModel bind(ParameterBinder& binder, const PoolModel& model);

struct SoftAssignment {
  DenseMatrix s;  // N x K, rows on the simplex
};

struct PooledGraph {
  DenseMatrix a_pool;        // S^T Ã S
  DenseMatrix a_tilde_pool;  // zero diagonal, degree-normalized
  DenseMatrix x_pool;        // S^T X
};

// ---- recorded forms -------------------------------------------------------

// Node embeddings from the stacked MP layers.
Var gnn_forward(const Var& x, const SparseMatrix& a_tilde, const BoundPoolModel& model);
// MLP with row-softmax head at the model temperature.
Var assignment_head(const Var& embeddings, const BoundPoolModel& model);
Var compute_assignments(const Var& x, const SparseMatrix& a_tilde, const BoundPoolModel& model);

// L_c = -Tr(S^T Ã S) / Tr(S^T D̃ S). Throws DegenerateInputError when the
// denominator vanishes (edgeless graph).
Var cut_loss(const Var& s, const NormalizedAdjacency& a_tilde);
// Dense path; D̃ is taken from the row sums of `a_tilde`.
Var cut_loss(const Var& s, const Var& a_tilde);

// L_o = || S^T S / ||S^T S||_F - I_K / sqrt(K) ||_F
Var ortho_loss(const Var& s);

Var unsupervised_loss(const Var& s, const NormalizedAdjacency& a_tilde);
Var unsupervised_loss(const Var& s, const Var& a_tilde);

struct RatioTraceVars {
  Var raw;      // tr[(S^T D S)^{-1} (S^T A S)]
  Var aligned;  // -raw / K, lower is better like L_c
};

// Throws DegenerateInputError if S^T D S is singular (e.g. an empty cluster).
RatioTraceVars cut_loss_ratio_trace(const Var& s, const SparseMatrix& a,
                                    const std::vector<double>& degrees);

struct PooledVars {
  Var a_pool;
  Var a_tilde_pool;
  Var x_pool;
};

PooledVars coarsen(const Var& s, const SparseMatrix& a_tilde, const Var& x);
PooledVars coarsen(const Var& s, const Var& a_tilde, const Var& x);

struct UnpooledVars {
  Var x_rec;  // S X_pool
  Var a_rec;  // S A_pool S^T
};

UnpooledVars unpool(const Var& s, const Var& x_pool, const Var& a_pool);

// ---- value forms ----------------------------------------------------------

DenseMatrix mp_forward(const DenseMatrix& x, const NormalizedAdjacency& a_tilde,
                       const MpLayerParams& p);
SoftAssignment compute_assignments(const DenseMatrix& x, const NormalizedAdjacency& a_tilde,
                                   const PoolModel& model);
double cut_loss(const DenseMatrix& s, const NormalizedAdjacency& a_tilde);
double cut_loss_dense(const DenseMatrix& s, const DenseMatrix& a_tilde);
double ortho_loss(const DenseMatrix& s);
double unsupervised_loss(const DenseMatrix& s, const NormalizedAdjacency& a_tilde);

struct RatioTraceValue {
  double raw = 0.0;
  double aligned = 0.0;
};

RatioTraceValue cut_loss_ratio_trace(const DenseMatrix& s, const SparseMatrix& a,
                                     const std::vector<double>& degrees);

PooledGraph coarsen(const DenseMatrix& s, const NormalizedAdjacency& a_tilde, const DenseMatrix& x);
std::pair<DenseMatrix, DenseMatrix> unpool(const DenseMatrix& s, const DenseMatrix& x_pool,
                                           const DenseMatrix& a_pool);

// Row-wise argmax, ties to the lowest cluster index.
std::vector<int> hard_labels(const DenseMatrix& s);

}  // namespace mincut
