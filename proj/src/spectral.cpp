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

#include "mincut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mincut/errors.hpp"

namespace mincut {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenResult symmetric_eigendecomposition(const DenseMatrix& m, const JacobiOptions& options) {
  if (m.rows() != m.cols()) {
    throw ContractError("symmetric_eigendecomposition: matrix is " + m.shape_string());
  }
  const std::size_t n = m.rows();
  double scale_ref = 1.0;
  for (double v : m.values()) scale_ref = std::max(scale_ref, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > options.symmetry_tol * scale_ref) {
        throw ContractError("symmetric_eigendecomposition: input not symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  DenseMatrix a = m;
  // Symmetrize exactly so row and column updates stay mirrored.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  // Row p of vt is eigenvector p.
  DenseMatrix vt = DenseMatrix::identity(n);

  struct Rotation {
    std::size_t q;
    double c;
    double s;
  };
  std::vector<Rotation> rotations;
  std::vector<std::size_t> applied(n, 0);

  const double fro = std::max(frobenius_norm(a), std::numeric_limits<double>::min());
  int sweep = 0;
  for (;; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= 1e-15 * fro || n < 2) break;
    if (sweep >= options.max_sweeps) {
      throw NumericError("Jacobi eigensolver did not converge after " +
                         std::to_string(options.max_sweeps) +
                         " sweeps; off-diagonal norm " + std::to_string(off));
    }
    // Rotations below the threshold are deferred during the first sweeps.
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      // Every rotation of this pass pairs p with some q. The column half of
      // each rotation is queued and replayed on a row right before the row is
      // read, so all updates walk rows contiguously. Applying the same
      // operations in the same order keeps a bitwise symmetric.
      rotations.clear();
      std::fill(applied.begin(), applied.end(), std::size_t{0});
      auto catch_up = [&](std::size_t r) {
        auto row = a.row(r);
        double xp = row[p];
        for (std::size_t i = applied[r]; i < rotations.size(); ++i) {
          const Rotation& rot = rotations[i];
          if (rot.q == r) continue;
          const double xq = row[rot.q];
          row[rot.q] = rot.s * xp + rot.c * xq;
          xp = rot.c * xp - rot.s * xq;
        }
        row[p] = xp;
        applied[r] = rotations.size();
      };

      auto row_p = a.row(p);
      for (std::size_t q = p + 1; q < n; ++q) {
        catch_up(q);
        auto row_q = a.row(q);
        const double apq = row_p[q];
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(row_p[p]) + g == std::abs(row_p[p]) &&
            std::abs(row_q[q]) + g == std::abs(row_q[q])) {
          row_p[q] = row_q[p] = 0.0;
          continue;
        }
        if (std::abs(apq) <= threshold || apq == 0.0) continue;

        const double app = row_p[p];
        const double aqq = row_q[q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = row_p[k];
          const double akq = row_q[k];
          row_p[k] = c * akp - s * akq;
          row_q[k] = s * akp + c * akq;
        }
        row_p[p] = app - t * apq;
        row_q[q] = aqq + t * apq;
        row_p[q] = row_q[p] = 0.0;
        rotations.push_back({q, c, s});
        // Row q already holds this rotation's effect on its entries p and q.
        applied[q] = rotations.size();

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
      if (!rotations.empty()) {
        for (std::size_t r = 0; r < n; ++r)
          if (r != p) catch_up(r);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenResult out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = a(src, src);
    const auto v = vt.row(src);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, col) = v[r];
  }
  return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

DenseMatrix kmeans_plus_plus(const DenseMatrix& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  DenseMatrix centroids(k, points.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t first = pick(rng);
  std::copy_n(points.row(first).begin(), points.cols(), centroids.row(0).begin());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), centroids.row(0));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    std::copy_n(points.row(chosen).begin(), points.cols(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(points.row(i), centroids.row(c)));
  }
  return centroids;
}

struct LloydRun {
  std::vector<int> labels;
  DenseMatrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

LloydRun lloyd(const DenseMatrix& points, DenseMatrix centroids, int max_iter) {
  const std::size_t n = points.rows();
  const std::size_t k = centroids.rows();
  const std::size_t dim = points.cols();
  LloydRun run;
  run.labels.assign(n, -1);
  std::vector<double> dist(n);
  // Centroid means carry rounding error proportional to the data scale.
  double scale = 0.0;
  for (double v : points.values()) scale += v * v;
  const double slack = 1e-12 * scale;

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points.row(i), centroids.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points.row(i), centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (run.labels[i] != best) changed = true;
      run.labels[i] = best;
      dist[i] = best_d;
      inertia += best_d;
    }
    if (!run.trace.empty() && inertia > run.trace.back() * (1.0 + 1e-12) + slack) {
      throw NumericError("k-means inertia increased from " + std::to_string(run.trace.back()) +
                         " to " + std::to_string(inertia));
    }
    run.trace.push_back(inertia);
    run.inertia = inertia;
    if (!changed) break;

    DenseMatrix sums(k, dim);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(run.labels[i]);
      ++counts[c];
      auto s = sums.row(c);
      const auto p = points.row(i);
      for (std::size_t j = 0; j < dim; ++j) s[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (dist[i] > dist[far]) far = i;
        std::copy_n(points.row(far).begin(), dim, centroids.row(c).begin());
        dist[far] = 0.0;
        continue;
      }
      auto dst = centroids.row(c);
      const auto s = sums.row(c);
      for (std::size_t j = 0; j < dim; ++j) dst[j] = s[j] / static_cast<double>(counts[c]);
    }
  }
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

KMeansResult kmeans_detailed(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options) {
  if (k == 0 || k > points.rows()) {
    throw ParameterError("kmeans: k = " + std::to_string(k) + " for " +
                         std::to_string(points.rows()) + " points");
  }
  if (options.restarts < 1 || options.max_iter < 1) {
    throw ParameterError("kmeans: restarts and max_iter must be positive");
  }
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    LloydRun run = lloyd(points, kmeans_plus_plus(points, k, rng), options.max_iter);
    if (!have || run.inertia < best.inertia) {
      have = true;
      best.assignment = {std::move(run.labels), static_cast<int>(k)};
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.best_restart = r;
      best.inertia_trace = std::move(run.trace);
    }
  }
  return best;
}

HardAssignment kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, int max_iter) {
  KMeansOptions options;
  options.max_iter = max_iter;
  return kmeans_detailed(points, k, seed, options).assignment;
}

HardAssignment spectral_clustering(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("spectral_clustering: k must be >= 2");
  if (k > g.n) throw ParameterError("spectral_clustering: k exceeds node count");
  const NormalizedAdjacency norm = normalize_adjacency(g);
  const EigenResult eig = symmetric_eigendecomposition(norm.matrix.densify());
  DenseMatrix embedding(g.n, k);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < k; ++j) embedding(i, j) = eig.eigenvectors(i, j);
  return kmeans(embedding, k, seed);
}

}  // namespace mincut
