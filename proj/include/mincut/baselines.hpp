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

// Minimal Top-K and DiffPool pooling, used as comparison points for
// MinCutPool in the clustering and autoencoder experiments.

#include <cstddef>
#include <random>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/layers.hpp"
#include "mincut/sparse_matrix.hpp"
#include "mincut/tape.hpp"

namespace mincut {

struct TopKParams {
  DenseMatrix p;  // F x 1 projection
};

TopKParams make_topk_params(std::size_t features, std::mt19937_64& rng);

struct TopKPooled {
  Var x_pool;                     // gated rows of the kept nodes
  SparseMatrix a_pool;            // kept rows/cols of Ã, re-indexed
  std::vector<std::size_t> kept;  // strictly increasing
  Var scores;                     // N x 1, X p
  Var gate;                       // k x 1, tanh of kept scores
};

// Keeps the k nodes with the largest score (ties to the lower node index).
// Throws ParameterError if k is 0 or exceeds the node count.
TopKPooled topk_pool(const Var& x, const SparseMatrix& a_tilde, const Var& p, std::size_t k);

// Indices of the k largest scores, ascending; ties to the lower index.
std::vector<std::size_t> topk_indices(const DenseMatrix& scores, std::size_t k);

// Pooled rows scattered back to their node ids; dropped nodes get zeros.
Var topk_unpool(std::span<const std::size_t> kept, const Var& x_pool, std::size_t n);
DenseMatrix topk_unpool(std::span<const std::size_t> kept, const DenseMatrix& x_pool, std::size_t n);

struct DiffPoolParams {
  MpLayerParams embed;                // X -> Z, N x H
  std::vector<MpLayerParams> assign;  // Z -> logits, last layer has width K
};

DiffPoolParams make_diffpool_params(std::size_t in, std::size_t hidden, std::size_t k,
                                    std::mt19937_64& rng);
std::vector<DenseMatrix*> parameters(DiffPoolParams& p);

struct BoundDiffPool {
  BoundMpLayer embed;
  std::vector<BoundMpLayer> assign;
};

BoundDiffPool bind(ParameterBinder& binder, const DiffPoolParams& p);

struct DiffPoolForward {
  Var embeddings;  // Z
  Var s;           // row-softmax of the assignment stack applied to Z
};

DiffPoolForward diffpool_forward(const Var& x, const SparseMatrix& a_tilde, const BoundDiffPool& p);

struct DiffPoolLosses {
  Var link;     // ||Ã - S S^T||_F / N^2
  Var entropy;  // mean row entropy of S
};

DiffPoolLosses diffpool_losses(const Var& s, const DenseMatrix& a_tilde);

struct DiffPoolLossValues {
  double link = 0.0;
  double entropy = 0.0;
};

DiffPoolLossValues diffpool_losses(const DenseMatrix& s, const DenseMatrix& a_tilde);

}  // namespace mincut
