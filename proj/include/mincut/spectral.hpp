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
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/graph.hpp"

namespace mincut {

// Hard clustering in index form: labels[i] in [0, k).
struct HardAssignment {
  std::vector<int> labels;
  int k = 0;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // descending
  DenseMatrix eigenvectors;         // column i pairs with eigenvalues[i]
  int sweeps = 0;
};

struct JacobiOptions {
  int max_sweeps = 100;
  double symmetry_tol = 1e-10;
};

// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
// Throws ContractError if `m` is not square and symmetric, NumericError
// (with the remaining off-diagonal norm) if the sweep cap is hit.
EigenResult symmetric_eigendecomposition(const DenseMatrix& m, const JacobiOptions& options = {});

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

struct KMeansResult {
  HardAssignment assignment;
  DenseMatrix centroids;
  double inertia = 0.0;
  int best_restart = 0;
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_trace;
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` by inertia
// (ties go to the earlier restart). Nearest-centroid ties go to the lower
// centroid index; an empty cluster is re-seeded at the point farthest from
// its centroid. Throws ParameterError if k is 0 or exceeds the point count.
KMeansResult kmeans_detailed(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options = {});

HardAssignment kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                      int max_iter = 300);

// Normalized adjacency -> leading k eigenvectors -> k-means on their rows.
HardAssignment spectral_clustering(const Graph& g, std::size_t k, std::uint64_t seed);

}  // namespace mincut
