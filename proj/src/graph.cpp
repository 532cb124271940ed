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

#include "mincut/graph.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "mincut/errors.hpp"

namespace mincut {

void Graph::validate() const {
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw DataError("adjacency is not " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (features.rows() != n) {
    throw DataError("features have " + std::to_string(features.rows()) + " rows for " +
                    std::to_string(n) + " nodes");
  }
  if (labels && labels->size() != n) {
    throw DataError("labels have length " + std::to_string(labels->size()) + " for " +
                    std::to_string(n) + " nodes");
  }
  for (const auto& e : adjacency.entries()) {
    if (e.row == e.col) throw DataError("adjacency has a self-loop at " + std::to_string(e.row));
    if (e.value < 0.0) throw DataError("adjacency has a negative weight");
  }
  if (!adjacency.is_symmetric()) throw DataError("adjacency is not symmetric");
}

Graph make_graph(std::size_t n, const std::vector<SparseEntry>& edges, DenseMatrix features,
                 std::optional<std::vector<int>> labels) {
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  for (const auto& e : edges) {
    if (e.row >= n || e.col >= n) {
      throw DataError("edge (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                      ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (e.value < 0.0) throw DataError("negative edge weight");
    if (e.row == e.col) continue;
    const auto key = std::minmax(e.row, e.col);
    auto [it, inserted] = weights.emplace(key, e.value);
    if (!inserted && it->second != e.value) {
      throw DataError("conflicting weights for edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ")");
    }
  }
  std::vector<SparseEntry> entries;
  entries.reserve(weights.size() * 2);
  for (const auto& [key, w] : weights) {
    if (w == 0.0) continue;
    entries.push_back({key.first, key.second, w});
    entries.push_back({key.second, key.first, w});
  }
  Graph g;
  g.n = n;
  g.adjacency = SparseMatrix(n, n, std::move(entries));
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.validate();
  return g;
}

NormalizedAdjacency normalize_adjacency(const Graph& g) {
  NormalizedAdjacency out;
  out.degrees = g.adjacency.row_sums();
  for (const auto& e : g.adjacency.entries()) {
    if (e.value < 0.0) throw DataError("normalize_adjacency: negative edge weight");
  }
  // w / sqrt(d_i d_j) rounds once per factor and is exactly symmetric.
  // Stored entries always have positive degree at both ends.
  std::vector<SparseEntry> entries;
  entries.reserve(g.adjacency.nnz());
  for (const auto& e : g.adjacency.entries()) {
    entries.push_back(
        {e.row, e.col, e.value / std::sqrt(out.degrees[e.row] * out.degrees[e.col])});
  }
  out.matrix = SparseMatrix(g.n, g.n, std::move(entries));
  out.tilde_degrees = out.matrix.row_sums();
  return out;
}

Graph generate_community_graph(std::size_t k, std::size_t nodes_per_cluster, double p_in,
                               double p_out, std::uint64_t seed) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (k == 0 || nodes_per_cluster == 0) throw ParameterError("community graph needs k, size >= 1");
  if (!in_unit(p_in) || !in_unit(p_out)) throw ParameterError("edge probabilities must be in [0, 1]");
  if (!(p_in > p_out)) throw ParameterError("community graph requires p_in > p_out");

  const std::size_t n = k * nodes_per_cluster;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / nodes_per_cluster);

  std::vector<SparseEntry> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? p_in : p_out;
      // Always draw so the stream does not depend on the probabilities.
      const double u = coin(rng);
      if (u < p) edges.push_back({i, j, 1.0});
    }
  }

  const double spacing = k > 1 ? 2.0 * std::sin(std::numbers::pi / static_cast<double>(k)) : 1.0;
  std::normal_distribution<double> jitter(0.0, 0.1 * spacing);
  DenseMatrix features(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * labels[i] / static_cast<double>(k);
    features(i, 0) = std::cos(angle) + jitter(rng);
    features(i, 1) = std::sin(angle) + jitter(rng);
  }
  return make_graph(n, edges, std::move(features), std::move(labels));
}

Graph generate_grid_graph(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) throw ParameterError("grid dimensions must be >= 2");
  const std::size_t n = rows * cols;
  std::vector<SparseEntry> edges;
  DenseMatrix features(n, 2);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t id = r * cols + c;
      features(id, 0) = static_cast<double>(c) / static_cast<double>(cols - 1);
      features(id, 1) = static_cast<double>(r) / static_cast<double>(rows - 1);
      if (c + 1 < cols) edges.push_back({id, id + 1, 1.0});
      if (r + 1 < rows) edges.push_back({id, id + cols, 1.0});
    }
  }
  return make_graph(n, edges, std::move(features));
}

Graph generate_ring_graph(std::size_t n) {
  if (n < 2) throw ParameterError("ring size must be >= 2");
  std::vector<SparseEntry> edges;
  DenseMatrix features(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    features(i, 0) = std::cos(angle);
    features(i, 1) = std::sin(angle);
    edges.push_back({i, (i + 1) % n, 1.0});
  }
  return make_graph(n, edges, std::move(features));
}

std::vector<int> connected_components(const Graph& g) {
  std::vector<std::vector<std::size_t>> neighbours(g.n);
  for (const auto& e : g.adjacency.entries()) neighbours[e.row].push_back(e.col);
  std::vector<int> comp(g.n, -1);
  int next = 0;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : neighbours[u]) {
        if (comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace mincut
