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

#include "mincut/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "mincut/errors.hpp"

namespace mincut {

TopKParams make_topk_params(std::size_t features, std::mt19937_64& rng) {
  return {glorot_uniform(features, 1, rng)};
}

std::vector<std::size_t> topk_indices(const DenseMatrix& scores, std::size_t k) {
  const std::size_t n = scores.rows();
  if (k == 0 || k > n) {
    throw ParameterError("top-k: k = " + std::to_string(k) + " for " + std::to_string(n) +
                         " nodes");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores(a, 0) > scores(b, 0); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

TopKPooled topk_pool(const Var& x, const SparseMatrix& a_tilde, const Var& p, std::size_t k) {
  if (p.cols() != 1 || p.rows() != x.cols()) {
    throw ShapeError("top-k: projection " + p.value().shape_string() + " for features " +
                     x.value().shape_string());
  }
  TopKPooled out;
  out.scores = matmul(x, p);
  out.kept = topk_indices(out.scores.value(), k);
  out.gate = tanh(gather_rows(out.scores, out.kept));
  out.x_pool = scale_rows(gather_rows(x, out.kept), out.gate);

  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < out.kept.size(); ++i) position.emplace(out.kept[i], i);
  std::vector<SparseEntry> entries;
  for (const auto& e : a_tilde.entries()) {
    const auto r = position.find(e.row);
    const auto c = position.find(e.col);
    if (r != position.end() && c != position.end()) entries.push_back({r->second, c->second, e.value});
  }
  out.a_pool = SparseMatrix(k, k, std::move(entries));
  return out;
}

Var topk_unpool(std::span<const std::size_t> kept, const Var& x_pool, std::size_t n) {
  return scatter_rows(x_pool, kept, n);
}

DenseMatrix topk_unpool(std::span<const std::size_t> kept, const DenseMatrix& x_pool, std::size_t n) {
  Tape tape;
  return topk_unpool(kept, tape.constant(x_pool), n).value();
}

DiffPoolParams make_diffpool_params(std::size_t in, std::size_t hidden, std::size_t k,
                                    std::mt19937_64& rng) {
  DiffPoolParams p;
  p.embed = make_mp_layer(in, hidden, Activation::kElu, rng);
  p.assign.push_back(make_mp_layer(hidden, hidden, Activation::kLinear, rng));
  p.assign.push_back(make_mp_layer(hidden, k, Activation::kLinear, rng));
  return p;
}

std::vector<DenseMatrix*> parameters(DiffPoolParams& p) {
  std::vector<DenseMatrix*> out;
  append_parameters(p.embed, out);
  for (auto& layer : p.assign) append_parameters(layer, out);
  return out;
}

BoundDiffPool bind(ParameterBinder& binder, const DiffPoolParams& p) {
  BoundDiffPool b;
  b.embed = binder.bind(p.embed);
  for (const auto& layer : p.assign) b.assign.push_back(binder.bind(layer));
  return b;
}

DiffPoolForward diffpool_forward(const Var& x, const SparseMatrix& a_tilde, const BoundDiffPool& p) {
  const Var z = mp_forward(x, a_tilde, p.embed);
  Var h = z;
  for (const auto& layer : p.assign) h = mp_forward(h, a_tilde, layer);
  return {z, softmax_rows(h)};
}

DiffPoolLosses diffpool_losses(const Var& s, const DenseMatrix& a_tilde) {
  if (a_tilde.rows() != s.rows() || a_tilde.cols() != s.rows()) {
    throw ShapeError("diffpool_losses: adjacency " + a_tilde.shape_string() + " for assignment " +
                     s.value().shape_string());
  }
  Tape& tape = s.tape();
  const double n = static_cast<double>(s.rows());
  const Var residual = subtract(tape.constant(a_tilde), matmul(s, transpose(s)));
  return {scale(frobenius_norm(residual), 1.0 / (n * n)), mean_row_entropy(s)};
}

DiffPoolLossValues diffpool_losses(const DenseMatrix& s, const DenseMatrix& a_tilde) {
  Tape tape;
  const DiffPoolLosses l = diffpool_losses(tape.constant(s), a_tilde);
  return {l.link.value().scalar(), l.entropy.value().scalar()};
}

}  // namespace mincut
