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

#include "mincut/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mincut/baselines.hpp"
#include "mincut/pool.hpp"

namespace mincut {

double gradient_check(const LossBuilder& build, const std::vector<DenseMatrix>& inputs,
                      const GradCheckOptions& options) {
  auto evaluate = [&](const std::vector<DenseMatrix>& values) {
    Tape tape;
    std::vector<Var> leaves;
    for (const auto& v : values) leaves.push_back(tape.constant(v));
    return build(tape, leaves).value().scalar();
  };

  Tape tape;
  std::vector<Var> leaves;
  for (const auto& v : inputs) leaves.push_back(tape.variable(v));
  const Gradients grads = tape.backward(build(tape, leaves));

  double worst = 0.0;
  std::vector<DenseMatrix> probe = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const DenseMatrix& analytic = grads[leaves[i]];
    DenseMatrix numeric(inputs[i].rows(), inputs[i].cols());
    for (std::size_t j = 0; j < inputs[i].size(); ++j) {
      const double x = inputs[i].values()[j];
      probe[i].values()[j] = x + options.step;
      const double plus = evaluate(probe);
      probe[i].values()[j] = x - options.step;
      const double minus = evaluate(probe);
      probe[i].values()[j] = x;
      numeric.values()[j] = (plus - minus) / (2.0 * options.step);
    }
    const double diff = frobenius_norm(subtract(analytic, numeric));
    const double denom =
        std::max({frobenius_norm(analytic), frobenius_norm(numeric), options.norm_floor});
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

Graph random_graph(std::size_t n, std::size_t features, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<SparseEntry> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < p) edges.push_back({i, j, 1.0});
  if (edges.empty() && n >= 2) edges.push_back({0, 1, 1.0});
  DenseMatrix x(n, features);
  for (double& v : x.values()) v = val(rng);
  return make_graph(n, edges, std::move(x));
}

namespace {

class Checker {
 public:
  Checker(std::uint64_t seed, const GradCheckOptions& options)
      : rng_(seed), options_(options) {}

  DenseMatrix uniform(std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    DenseMatrix m(r, c);
    for (double& v : m.values()) v = d(rng_);
    return m;
  }

  // Contracts a matrix-valued output against a fixed random weight so every
  // Jacobian entry contributes.
  LossBuilder project(std::function<Var(Tape&, std::span<const Var>)> op, std::size_t r,
                      std::size_t c) {
    DenseMatrix weight = uniform(r, c);
    return [op, weight](Tape& tape, std::span<const Var> leaves) {
      return sum(hadamard(op(tape, leaves), tape.constant(weight)));
    };
  }

  void run(const std::string& name, const LossBuilder& build, std::vector<DenseMatrix> inputs) {
    results_.push_back({name, gradient_check(build, inputs, options_)});
  }

  std::uint64_t next_seed() { return rng_(); }
  std::vector<GradCheckResult> take() { return std::move(results_); }

 private:
  std::mt19937_64 rng_;
  GradCheckOptions options_;
  std::vector<GradCheckResult> results_;
};

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed,
                                                 const GradCheckOptions& options) {
  Checker c(seed, options);
  using Leaves = std::span<const Var>;

  c.run("matmul", c.project([](Tape&, Leaves v) { return matmul(v[0], v[1]); }, 3, 2),
        {c.uniform(3, 4), c.uniform(4, 2)});

  const Graph g10 = random_graph(10, 3, 0.35, c.next_seed());
  const NormalizedAdjacency norm10 = normalize_adjacency(g10);
  const SparseMatrix a10 = norm10.matrix;
  const DenseMatrix a10_dense = a10.densify();

  c.run("spmm", c.project([a10](Tape&, Leaves v) { return spmm(a10, v[0]); }, 10, 4),
        {c.uniform(10, 4)});
  c.run("transpose", c.project([](Tape&, Leaves v) { return transpose(v[0]); }, 2, 3),
        {c.uniform(3, 2)});
  c.run("add", c.project([](Tape&, Leaves v) { return add(v[0], v[1]); }, 3, 3),
        {c.uniform(3, 3), c.uniform(3, 3)});
  c.run("subtract", c.project([](Tape&, Leaves v) { return subtract(v[0], v[1]); }, 3, 3),
        {c.uniform(3, 3), c.uniform(3, 3)});
  c.run("scale", c.project([](Tape&, Leaves v) { return scale(v[0], -1.7); }, 2, 4),
        {c.uniform(2, 4)});
  c.run("hadamard", c.project([](Tape&, Leaves v) { return hadamard(v[0], v[1]); }, 3, 2),
        {c.uniform(3, 2), c.uniform(3, 2)});
  c.run("trace", [](Tape&, Leaves v) { return trace(v[0]); }, {c.uniform(4, 4)});
  c.run("frobenius_norm", [](Tape&, Leaves v) { return frobenius_norm(v[0]); }, {c.uniform(3, 4)});
  c.run("sum", [](Tape&, Leaves v) { return sum(v[0]); }, {c.uniform(3, 4)});
  c.run("sum_squares", [](Tape&, Leaves v) { return sum_squares(v[0]); }, {c.uniform(3, 4)});
  c.run("relu", c.project([](Tape&, Leaves v) { return relu(v[0]); }, 4, 4), {c.uniform(4, 4)});
  c.run("elu", c.project([](Tape&, Leaves v) { return elu(v[0]); }, 4, 4), {c.uniform(4, 4)});
  c.run("tanh", c.project([](Tape&, Leaves v) { return tanh(v[0]); }, 4, 4), {c.uniform(4, 4)});
  c.run("softmax_rows", c.project([](Tape&, Leaves v) { return softmax_rows(v[0]); }, 4, 3),
        {c.uniform(4, 3)});
  c.run("softmax_rows_temperature",
        c.project([](Tape&, Leaves v) { return softmax_rows(v[0], 0.5); }, 4, 3),
        {c.uniform(4, 3)});
  c.run("add_row_vector",
        c.project([](Tape&, Leaves v) { return add_row_vector(v[0], v[1]); }, 4, 3),
        {c.uniform(4, 3), c.uniform(1, 3)});
  c.run("scale_rows", c.project([](Tape&, Leaves v) { return scale_rows(v[0], v[1]); }, 4, 3),
        {c.uniform(4, 3), c.uniform(4, 1)});
  c.run("scale_cols", c.project([](Tape&, Leaves v) { return scale_cols(v[0], v[1]); }, 4, 3),
        {c.uniform(4, 3), c.uniform(3, 1)});
  c.run("row_sums", c.project([](Tape&, Leaves v) { return row_sums(v[0]); }, 4, 1),
        {c.uniform(4, 3)});
  c.run("mean_rows", c.project([](Tape&, Leaves v) { return mean_rows(v[0]); }, 1, 3),
        {c.uniform(4, 3)});
  c.run("inverse_sqrt_or_zero",
        c.project([](Tape&, Leaves v) { return inverse_sqrt_or_zero(v[0]); }, 3, 3),
        {c.uniform(3, 3, 0.2, 1.0)});
  c.run("zero_diagonal", c.project([](Tape&, Leaves v) { return zero_diagonal(v[0]); }, 3, 3),
        {c.uniform(3, 3)});
  c.run("divide", [](Tape&, Leaves v) { return divide(v[0], v[1]); },
        {c.uniform(1, 1), c.uniform(1, 1, 0.5, 1.0)});
  c.run("scalar_multiply",
        c.project([](Tape&, Leaves v) { return scalar_multiply(v[0], v[1]); }, 3, 2),
        {c.uniform(1, 1), c.uniform(3, 2)});
  c.run("inverse",
        c.project(
            [](Tape& t, Leaves v) {
              return inverse(add(v[0], t.constant(scale(DenseMatrix::identity(3), 3.0))));
            },
            3, 3),
        {c.uniform(3, 3)});
  const std::vector<std::size_t> picks{4, 0, 2};
  c.run("gather_rows", c.project([picks](Tape&, Leaves v) { return gather_rows(v[0], picks); }, 3, 2),
        {c.uniform(5, 2)});
  c.run("scatter_rows",
        c.project([picks](Tape&, Leaves v) { return scatter_rows(v[0], picks, 5); }, 5, 2),
        {c.uniform(3, 2)});
  const std::vector<int> classes{2, 0, 1, 1};
  c.run("softmax_cross_entropy",
        [classes](Tape&, Leaves v) { return softmax_cross_entropy(v[0], classes); },
        {c.uniform(4, 3)});
  c.run("mean_row_entropy", [](Tape&, Leaves v) { return mean_row_entropy(v[0]); },
        {c.uniform(4, 3, 0.1, 1.0)});

  // Composite MinCutPool pieces on a random 10-node graph.
  const std::size_t k = 3;
  c.run("mp_forward",
        c.project(
            [a10](Tape&, Leaves v) {
              return mp_forward(v[0], a10, BoundMpLayer{v[1], v[2], Activation::kElu});
            },
            10, 4),
        {g10.features, c.uniform(3, 4), c.uniform(3, 4)});
  c.run("mp_forward_dense_adjacency",
        c.project(
            [](Tape&, Leaves v) {
              return mp_forward(v[0], v[3], BoundMpLayer{v[1], v[2], Activation::kRelu});
            },
            10, 4),
        {g10.features, c.uniform(3, 4), c.uniform(3, 4), a10_dense});
  c.run("cut_loss", [norm10](Tape&, Leaves v) { return cut_loss(softmax_rows(v[0]), norm10); },
        {c.uniform(10, k)});
  c.run("cut_loss_dense",
        [a10_dense](Tape& t, Leaves v) { return cut_loss(softmax_rows(v[0]), t.constant(a10_dense)); },
        {c.uniform(10, k)});
  c.run("ortho_loss", [](Tape&, Leaves v) { return ortho_loss(softmax_rows(v[0])); },
        {c.uniform(10, k)});
  c.run("cut_loss_ratio_trace",
        [g10](Tape&, Leaves v) {
          return cut_loss_ratio_trace(softmax_rows(v[0]), g10.adjacency, g10.adjacency.row_sums())
              .aligned;
        },
        {c.uniform(10, k)});
  c.run("coarsen",
        [a10, w1 = c.uniform(k, k), w2 = c.uniform(k, 3)](Tape& t, Leaves v) {
          const PooledVars p = coarsen(softmax_rows(v[0]), a10, v[1]);
          return add(sum(hadamard(p.a_tilde_pool, t.constant(w1))),
                     add(sum(hadamard(p.x_pool, t.constant(w2))), trace(p.a_pool)));
        },
        {c.uniform(10, k), g10.features});
  c.run("unpool",
        [w1 = c.uniform(10, 2), w2 = c.uniform(10, 10)](Tape& t, Leaves v) {
          const UnpooledVars u = unpool(softmax_rows(v[0]), v[1], v[2]);
          return add(sum(hadamard(u.x_rec, t.constant(w1))), sum(hadamard(u.a_rec, t.constant(w2))));
        },
        {c.uniform(10, k), c.uniform(k, 2), c.uniform(k, k)});
  c.run("topk_pool",
        c.project(
            [a10](Tape&, Leaves v) {
              const TopKPooled p = topk_pool(v[0], a10, v[1], 4);
              return topk_unpool(p.kept, p.x_pool, 10);
            },
            10, 3),
        {g10.features, c.uniform(3, 1)});
  c.run("diffpool_losses",
        [a10_dense](Tape&, Leaves v) {
          const DiffPoolLosses l = diffpool_losses(softmax_rows(v[0]), a10_dense);
          return add(l.link, l.entropy);
        },
        {c.uniform(10, k)});

  // Full L_u through every model parameter.
  std::mt19937_64 init(c.next_seed());
  PoolModelConfig mc;
  mc.in_features = g10.features.cols();
  mc.k = k;
  mc.gnn_widths = {6};
  mc.mlp_hidden = {5};
  PoolModel model = make_pool_model(mc, init);
  std::vector<DenseMatrix> values;
  for (const DenseMatrix* p : parameters(model)) values.push_back(*p);
  c.run("unsupervised_loss_model",
        [model, g10, norm10](Tape& t, Leaves v) {
          // Leaves arrive in parameters() order.
          BoundPoolModel b;
          std::size_t i = 0;
          for (const auto& layer : model.gnn) {
            b.gnn.push_back({v[i], v[i + 1], layer.activation});
            i += 2;
          }
          for (std::size_t l = 0; l < model.mlp.layers.size(); ++l) {
            b.mlp.push_back({v[i], v[i + 1]});
            i += 2;
          }
          b.hidden_activation = model.mlp.hidden_activation;
          b.k = model.k;
          b.temperature = model.temperature;
          return unsupervised_loss(compute_assignments(t.constant(g10.features), norm10.matrix, b),
                                   norm10);
        },
        values);
  return c.take();
}

}  // namespace mincut
