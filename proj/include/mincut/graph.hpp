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
#include <cstdint>
#include <optional>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/sparse_matrix.hpp"

namespace mincut {

// Undirected weighted graph with node features. The adjacency is symmetric,
// non-negative and has an empty diagonal.
struct Graph {
  std::size_t n = 0;
  SparseMatrix adjacency;
  DenseMatrix features;
  std::optional<std::vector<int>> labels;
  std::optional<int> graph_label;

  std::size_t edge_count() const { return adjacency.nnz() / 2; }

  // Throws DataError if any structural invariant is violated.
  void validate() const;
};

// Builds a Graph from an undirected edge list. Each pair may appear in one
// or both orientations (weights must agree); self-loops are dropped.
Graph make_graph(std::size_t n, const std::vector<SparseEntry>& edges, DenseMatrix features,
                 std::optional<std::vector<int>> labels = std::nullopt);

struct NormalizedAdjacency {
  SparseMatrix matrix;                // D^{-1/2} A D^{-1/2}
  std::vector<double> degrees;        // diagonal of D
  std::vector<double> tilde_degrees;  // row sums of the normalized matrix
};

// Isolated nodes get D^{-1/2} = 0, hence zero rows and tilde-degree 0.
// Throws DataError on negative weights.
NormalizedAdjacency normalize_adjacency(const Graph& g);

// Stochastic block model with k blocks of `nodes_per_cluster` nodes. Features
// are 2-D positions: block centers evenly spaced on the unit circle plus
// Gaussian jitter with sigma = 0.1 * distance between adjacent centers.
Graph generate_community_graph(std::size_t k, std::size_t nodes_per_cluster, double p_in,
                               double p_out, std::uint64_t seed);

// 4-neighbour lattice; features are (col, row) scaled to [0, 1]^2.
Graph generate_grid_graph(std::size_t rows, std::size_t cols);

// Cycle graph; features are positions on the unit circle.
Graph generate_ring_graph(std::size_t n);

// Component id per node; components are numbered in order of their smallest
// node id.
std::vector<int> connected_components(const Graph& g);

}  // namespace mincut
