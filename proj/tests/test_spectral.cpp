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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mincut/errors.hpp"
#include "mincut/graph.hpp"
#include "mincut/metrics.hpp"
#include "mincut/spectral.hpp"
#include "test_util.hpp"

using namespace mincut;
using mincut::testing::random_matrix;

namespace {

DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  const DenseMatrix a = random_matrix(n, n, rng);
  return scale(add(a, transpose(a)), 0.5);
}

}  // namespace

TEST_CASE("eigen trivial cases") {
  const EigenResult id = symmetric_eigendecomposition(DenseMatrix::identity(3));
  CHECK(id.eigenvalues == std::vector<double>{1.0, 1.0, 1.0});
  const EigenResult swap = symmetric_eigendecomposition(DenseMatrix{{0, 1}, {1, 0}});
  CHECK(std::abs(swap.eigenvalues[0] - 1.0) <= 1e-14);
  CHECK(std::abs(swap.eigenvalues[1] + 1.0) <= 1e-14);
  CHECK_THROWS_AS(symmetric_eigendecomposition(DenseMatrix{{0, 1}, {0, 0}}), ContractError);
  CHECK_THROWS_AS(symmetric_eigendecomposition(DenseMatrix(2, 3)), ContractError);
}

TEST_CASE("eigen reconstruction, residuals and orthonormality") {
  std::mt19937_64 rng(21);
  for (std::size_t n : {20u, 50u}) {
    const DenseMatrix m = random_symmetric(n, rng);
    const EigenResult r = symmetric_eigendecomposition(m);
    const DenseMatrix& v = r.eigenvectors;
    CHECK(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
    DenseMatrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = r.eigenvalues[i];
    CHECK(max_abs_diff(matmul(matmul(v, lambda), transpose(v)), m) <= 1e-8);
    CHECK(max_abs_diff(matmul_tn(v, v), DenseMatrix::identity(n)) <= 1e-8);
    const DenseMatrix mv = matmul(m, v);
    for (std::size_t i = 0; i < n; ++i) {
      double res = 0.0;
      for (std::size_t row = 0; row < n; ++row) {
        const double d = mv(row, i) - r.eigenvalues[i] * v(row, i);
        res += d * d;
      }
      CHECK(std::sqrt(res) < 1e-8 * std::max(1.0, std::abs(r.eigenvalues[i])));
    }
  }
}

TEST_CASE("eigen sweep cap reports non-convergence") {
  std::mt19937_64 rng(2);
  JacobiOptions opts;
  opts.max_sweeps = 1;
  CHECK_THROWS_AS(symmetric_eigendecomposition(random_symmetric(30, rng), opts), NumericError);
}

TEST_CASE("kmeans separated pairs and identical points") {
  const DenseMatrix pairs{{0, 0}, {0, 0}, {10, 10}, {10, 10}};
  const HardAssignment a = kmeans(pairs, 2, 1);
  CHECK(a.labels[0] == a.labels[1]);
  CHECK(a.labels[2] == a.labels[3]);
  CHECK(a.labels[0] != a.labels[2]);

  const KMeansResult same = kmeans_detailed(DenseMatrix(5, 2, 3.0), 2, 1);
  CHECK(same.inertia == 0.0);
  CHECK(std::all_of(same.assignment.labels.begin(), same.assignment.labels.end(),
                    [](int l) { return l == 0; }));
  CHECK_THROWS_AS(kmeans(pairs, 5, 1), ParameterError);
}

TEST_CASE("kmeans recovers gaussian blobs") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> noise(0.0, 0.05);
  const double centers[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(0.75)}};
  DenseMatrix pts(60, 2);
  std::vector<int> truth(60);
  for (std::size_t i = 0; i < 60; ++i) {
    truth[i] = static_cast<int>(i % 3);
    pts(i, 0) = centers[i % 3][0] + noise(rng);
    pts(i, 1) = centers[i % 3][1] + noise(rng);
  }
  const KMeansResult r = kmeans_detailed(pts, 3, 4);
  CHECK(nmi(r.assignment.labels, truth) == 1.0);
  for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
    CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1]);
  const KMeansResult again = kmeans_detailed(pts, 3, 4);
  CHECK(again.assignment.labels == r.assignment.labels);
  CHECK(again.inertia == r.inertia);
}

TEST_CASE("spectral clustering on disconnected cliques is exact") {
  for (std::size_t k : {2u, 3u, 5u}) {
    const Graph g = generate_community_graph(k, 6, 1.0, 0.0, 1);
    CHECK(nmi(spectral_clustering(g, k, 3).labels, connected_components(g)) == 1.0);
  }
  CHECK_THROWS_AS(spectral_clustering(generate_ring_graph(5), 1, 0), ParameterError);
}

TEST_CASE("spectral clustering on ring(12) matches brute-force normalized cut") {
  const Graph g = generate_ring_graph(12);
  const DenseMatrix a = g.adjacency.densify();
  double best = std::numeric_limits<double>::infinity();
  std::vector<unsigned> minimizers;
  for (unsigned mask = 1; mask < (1u << 12) - 1; ++mask) {
    double cut = 0.0, vol_in = 0.0, vol_out = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      const bool in_i = (mask >> i) & 1u;
      for (std::size_t j = 0; j < 12; ++j) {
        if (a(i, j) == 0.0) continue;
        (in_i ? vol_in : vol_out) += a(i, j);
        if (in_i != (((mask >> j) & 1u) != 0)) cut += a(i, j);
      }
    }
    const double ncut = cut / 2.0 / vol_in + cut / 2.0 / vol_out;
    if (ncut < best - 1e-12) {
      best = ncut;
      minimizers = {mask};
    } else if (std::abs(ncut - best) <= 1e-12) {
      minimizers.push_back(mask);
    }
  }
  const HardAssignment r = spectral_clustering(g, 2, 7);
  unsigned mask = 0;
  for (std::size_t i = 0; i < 12; ++i)
    if (r.labels[i] == r.labels[0]) mask |= 1u << i;
  const bool found = std::find(minimizers.begin(), minimizers.end(), mask) != minimizers.end() ||
                     std::find(minimizers.begin(), minimizers.end(), mask ^ 0xFFFu) != minimizers.end();
  CHECK(found);
  CHECK(std::count(r.labels.begin(), r.labels.end(), 0) == 6);
}
