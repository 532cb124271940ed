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

#include <cmath>
#include <filesystem>
#include <numeric>

#include "mincut/checkpoint.hpp"
#include "mincut/diagnostics.hpp"
#include "mincut/errors.hpp"
#include "mincut/gradcheck.hpp"
#include "mincut/graph.hpp"
#include "mincut/pool.hpp"
#include "test_util.hpp"

using namespace mincut;
using mincut::testing::random_matrix;
using mincut::testing::random_stochastic;

namespace {

Graph two_edges() { return make_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, DenseMatrix(4, 1)); }
Graph four_cycle() {
  return make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}}, DenseMatrix(4, 1));
}
const DenseMatrix kSplit{{1, 0}, {1, 0}, {0, 1}, {0, 1}};

}  // namespace

TEST_CASE("mp_forward examples") {
  std::mt19937_64 rng(1);
  const Graph g = random_graph(6, 3, 0.5, 4);
  const NormalizedAdjacency norm = normalize_adjacency(g);
  const DenseMatrix x = random_matrix(6, 3, rng);

  MpLayerParams skip{DenseMatrix(3, 3), DenseMatrix::identity(3), Activation::kRelu};
  CHECK(mp_forward(x, norm, skip) == relu(x));

  MpLayerParams p{random_matrix(3, 2, rng), random_matrix(3, 2, rng), Activation::kRelu};
  CHECK(mp_forward(DenseMatrix(6, 3), norm, p) == DenseMatrix(6, 2));

  const Graph edge = make_graph(2, {{0, 1, 1.0}}, DenseMatrix(2, 1));
  MpLayerParams swap{DenseMatrix{{1}}, DenseMatrix{{0}}, Activation::kRelu};
  CHECK(mp_forward(DenseMatrix{{1}, {0}}, normalize_adjacency(edge), swap) == DenseMatrix{{0}, {1}});

  CHECK_THROWS_AS(mp_forward(DenseMatrix(6, 2), norm, p), ShapeError);
}

TEST_CASE("compute_assignments contract") {
  const Graph g = generate_community_graph(3, 5, 0.8, 0.1, 2);
  const NormalizedAdjacency norm = normalize_adjacency(g);
  PoolModelConfig cfg;
  cfg.in_features = 2;
  cfg.k = 3;
  std::mt19937_64 rng(9);
  PoolModel model = make_pool_model(cfg, rng);
  const DenseMatrix s = compute_assignments(g.features, norm, model).s;
  CHECK(s.rows() == g.n);
  CHECK(s.cols() == 3);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double total = 0.0;
    for (double v : s.row(i)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  CHECK(compute_assignments(g.features, norm, model).s == s);

  model.mlp.layers.back().weight = DenseMatrix(model.mlp.layers.back().weight.rows(), 3);
  const DenseMatrix uniform = compute_assignments(g.features, norm, model).s;
  for (double v : uniform.values()) CHECK(std::abs(v - 1.0 / 3.0) <= 1e-15);
}

TEST_CASE("cut loss anchors") {
  const NormalizedAdjacency two = normalize_adjacency(two_edges());
  CHECK(std::abs(cut_loss(kSplit, two) + 1.0) <= 1e-10);

  const Graph edge = make_graph(2, {{0, 1, 1.0}}, DenseMatrix(2, 1));
  CHECK(std::abs(cut_loss(DenseMatrix::identity(2), normalize_adjacency(edge))) <= 1e-10);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generate_community_graph(2, 6, 0.9, 0.3, seed);
    const std::vector<int> comp = connected_components(g);
    if (*std::max_element(comp.begin(), comp.end()) != 0) continue;
    for (std::size_t k : {2u, 3u, 5u})
      CHECK(std::abs(cut_loss(DenseMatrix(g.n, k, 1.0 / k), normalize_adjacency(g)) + 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(cut_loss(DenseMatrix(3, 2, 0.5), normalize_adjacency(make_graph(3, {}, DenseMatrix(3, 1)))),
                  DegenerateInputError);
}

TEST_CASE("ortho loss anchors") {
  CHECK(std::abs(ortho_loss(kSplit)) <= 1e-10);
  const DenseMatrix collapsed{{1, 0}, {1, 0}, {1, 0}, {1, 0}};
  const double hand = std::sqrt(std::pow(1.0 - 1.0 / std::sqrt(2.0), 2) + 0.5);
  CHECK(std::abs(ortho_loss(collapsed) - hand) <= 1e-10);
  // S^T S = ones, so the normalized matrix is ones/2 and the distance to
  // I/sqrt(2) is sqrt(2 - sqrt(2)).
  CHECK(std::abs(ortho_loss(DenseMatrix(4, 2, 0.5)) - std::sqrt(2.0 - std::sqrt(2.0))) <= 1e-10);
}

TEST_CASE("unsupervised loss composes") {
  CHECK(std::abs(unsupervised_loss(kSplit, normalize_adjacency(two_edges())) + 1.0) <= 1e-10);
  const double uniform = unsupervised_loss(DenseMatrix(4, 2, 0.5), normalize_adjacency(four_cycle()));
  CHECK(std::abs(uniform - (-1.0 + std::sqrt(2.0 - std::sqrt(2.0)))) <= 1e-10);
  const Graph edge = make_graph(2, {{0, 1, 1.0}}, DenseMatrix(2, 1));
  CHECK(std::abs(unsupervised_loss(DenseMatrix::identity(2), normalize_adjacency(edge))) <= 1e-10);
}

TEST_CASE("loss bounds, sparse and dense agreement, relabeling invariance") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng() % 15, k = 2 + rng() % 4;
    const Graph g = random_graph(n, 2, 0.4, rng());
    const NormalizedAdjacency norm = normalize_adjacency(g);
    const DenseMatrix s = random_stochastic(n, k, rng, 1.0 + (rng() % 5));
    const double lc = cut_loss(s, norm);
    const double lo = ortho_loss(s);
    CHECK(lc >= -1.0 - 1e-9);
    CHECK(lc <= 1e-9);
    CHECK(lo >= -1e-9);
    CHECK(lo <= 2.0 + 1e-9);
    CHECK(std::abs(cut_loss_dense(s, norm.matrix.densify()) - lc) <= 1e-10);

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    DenseMatrix sp(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) sp(i, perm[j]) = s(i, j);
    CHECK(cut_loss(sp, norm) == lc);
  }
}

TEST_CASE("permutation equivariance of the assignment network") {
  const Graph g = random_graph(10, 3, 0.4, 5);
  PoolModelConfig cfg;
  cfg.in_features = 3;
  cfg.k = 4;
  std::mt19937_64 rng(3);
  const PoolModel model = make_pool_model(cfg, rng);
  std::vector<std::size_t> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<SparseEntry> edges;
  for (const SparseEntry& e : g.adjacency.entries()) edges.push_back({perm[e.row], perm[e.col], e.value});
  DenseMatrix x(10, 3);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(perm[i], j) = g.features(i, j);
  const Graph h = make_graph(10, edges, x);

  const DenseMatrix s = compute_assignments(g.features, normalize_adjacency(g), model).s;
  const DenseMatrix sh = compute_assignments(h.features, normalize_adjacency(h), model).s;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(sh(perm[i], j) - s(i, j)) <= 1e-12);
}

TEST_CASE("ratio trace anchors and explicit-inverse oracle") {
  const Graph g = two_edges();
  const RatioTraceValue v = cut_loss_ratio_trace(kSplit, g.adjacency, g.adjacency.row_sums());
  CHECK(std::abs(v.raw - 2.0) <= 1e-10);
  CHECK(std::abs(v.aligned + 1.0) <= 1e-10);
  const DenseMatrix empty_cluster{{1, 0}, {1, 0}, {1, 0}, {1, 0}};
  CHECK_THROWS_AS(cut_loss_ratio_trace(empty_cluster, g.adjacency, g.adjacency.row_sums()),
                  DegenerateInputError);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + rng() % 3;
    const Graph r = random_graph(12, 2, 0.4, rng());
    const DenseMatrix s = random_stochastic(12, k, rng);
    const DenseMatrix a = r.adjacency.densify();
    const std::vector<double> deg = r.adjacency.row_sums();
    DenseMatrix d(12, 12);
    for (std::size_t i = 0; i < 12; ++i) d(i, i) = deg[i];
    const DenseMatrix sds = matmul(transpose(s), matmul(d, s));
    const DenseMatrix sas = matmul(transpose(s), matmul(a, s));
    // Cofactor inverse for 2x2, Gauss elimination otherwise.
    DenseMatrix inv(k, k);
    if (k == 2) {
      const double det = sds(0, 0) * sds(1, 1) - sds(0, 1) * sds(1, 0);
      inv = DenseMatrix{{sds(1, 1) / det, -sds(0, 1) / det}, {-sds(1, 0) / det, sds(0, 0) / det}};
    } else {
      DenseMatrix aug = sds;
      inv = DenseMatrix::identity(k);
      for (std::size_t c = 0; c < k; ++c) {
        const double piv = aug(c, c);
        for (std::size_t j = 0; j < k; ++j) {
          aug(c, j) /= piv;
          inv(c, j) /= piv;
        }
        for (std::size_t rr = 0; rr < k; ++rr) {
          if (rr == c) continue;
          const double f = aug(rr, c);
          for (std::size_t j = 0; j < k; ++j) {
            aug(rr, j) -= f * aug(c, j);
            inv(rr, j) -= f * inv(c, j);
          }
        }
      }
    }
    const double oracle = trace(matmul(inv, sas));
    const RatioTraceValue got = cut_loss_ratio_trace(s, r.adjacency, deg);
    CHECK(std::abs(got.raw - oracle) <= 1e-10);
    CHECK(std::abs(got.aligned + oracle / k) <= 1e-10);
  }
}

TEST_CASE("coarsen hand examples") {
  const DenseMatrix x{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  const PooledGraph cyc = coarsen(kSplit, normalize_adjacency(four_cycle()), x);
  CHECK(max_abs_diff(cyc.a_pool, DenseMatrix{{1, 1}, {1, 1}}) <= 1e-15);
  CHECK(cyc.a_tilde_pool == DenseMatrix{{0, 1}, {1, 0}});
  CHECK(cyc.x_pool == DenseMatrix{{4, 6}, {12, 14}});

  diagnostics::reset();
  const PooledGraph split = coarsen(kSplit, normalize_adjacency(two_edges()), x);
  CHECK(max_abs_diff(split.a_pool, scale(DenseMatrix::identity(2), 2.0)) <= 1e-15);
  CHECK(split.a_tilde_pool == DenseMatrix(2, 2));
  CHECK(diagnostics::degenerate_pooled_graphs() == 1);
}

TEST_CASE("coarsen contract on random inputs") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const Graph g = random_graph(10, 3, 0.4, rng());
    const DenseMatrix s = random_stochastic(10, k, rng);
    const PooledGraph p = coarsen(s, normalize_adjacency(g), g.features);
    CHECK(p.a_pool.rows() == k);
    CHECK(p.x_pool.rows() == k);
    CHECK(p.x_pool.cols() == 3);
    CHECK(max_abs_diff(p.a_pool, transpose(p.a_pool)) <= 1e-10);
    for (std::size_t i = 0; i < k; ++i) CHECK(p.a_tilde_pool(i, i) == 0.0);
    for (double v : p.a_tilde_pool.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("unpool examples") {
  const DenseMatrix x_pool{{1, 2}, {3, 4}};
  const auto [x_rec, a_rec] = unpool(kSplit, x_pool, DenseMatrix{{1, 1}, {1, 1}});
  CHECK(x_rec == DenseMatrix{{1, 2}, {1, 2}, {3, 4}, {3, 4}});
  CHECK(a_rec == DenseMatrix(4, 4, 1.0));
  const auto [x_uni, a_uni] = unpool(DenseMatrix(3, 2, 0.5), x_pool, DenseMatrix::identity(2));
  CHECK(x_uni == DenseMatrix{{2, 3}, {2, 3}, {2, 3}});
  CHECK(a_uni == DenseMatrix(3, 3, 0.5));
}

TEST_CASE("hard labels break ties low") {
  CHECK(hard_labels(DenseMatrix{{0.5, 0.5}, {0.2, 0.8}, {0.4, 0.3}}) == std::vector<int>{0, 1, 0});
}

TEST_CASE("checkpoint round trip is exact") {
  PoolModelConfig cfg;
  cfg.in_features = 3;
  cfg.k = 4;
  cfg.gnn_widths = {8, 5};
  cfg.temperature = 0.7;
  std::mt19937_64 rng(6);
  const PoolModel model = make_pool_model(cfg, rng);
  const auto path = std::filesystem::temp_directory_path() / "mincut_test_model.json";
  save_pool_model(model, path);
  const PoolModel back = load_pool_model(path);
  CHECK(back.k == 4);
  CHECK(back.temperature == 0.7);
  REQUIRE(back.gnn.size() == 2);
  CHECK(back.gnn[1].theta_m == model.gnn[1].theta_m);
  CHECK(back.gnn[0].activation == model.gnn[0].activation);
  CHECK(back.mlp.layers.back().weight == model.mlp.layers.back().weight);
  CHECK(back.mlp.hidden_activation == model.mlp.hidden_activation);
}

TEST_CASE("gradient checks pass on a few seeds") {
  for (std::uint64_t seed : {1u, 2u, 3u})
    for (const GradCheckResult& r : run_gradient_checks(seed)) {
      INFO(r.name);
      CHECK(r.max_relative_error < 1e-5);
    }
}
