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

#include "mincut/pool.hpp"

#include <cmath>
#include <string>

#include "mincut/diagnostics.hpp"
#include "mincut/errors.hpp"

namespace mincut {

void PoolModel::validate() const {
  if (k < 2) throw ShapeError("pool model needs k >= 2");
  if (!(temperature > 0.0)) throw ParameterError("pool model temperature must be positive");
  if (mlp.layers.empty()) throw ShapeError("pool model has no MLP layers");
  std::size_t width = gnn.empty() ? mlp.layers.front().weight.rows() : gnn.front().in_width();
  for (const auto& layer : gnn) {
    if (layer.in_width() != width) throw ShapeError("pool model: MP layer widths do not chain");
    width = layer.out_width();
  }
  for (const auto& layer : mlp.layers) {
    if (layer.weight.rows() != width) throw ShapeError("pool model: MLP widths do not chain");
    if (layer.bias.rows() != 1 || layer.bias.cols() != layer.weight.cols()) {
      throw ShapeError("pool model: bias shape " + layer.bias.shape_string());
    }
    width = layer.weight.cols();
  }
  if (width != k) {
    throw ShapeError("pool model: head width " + std::to_string(width) + " != k " +
                     std::to_string(k));
  }
}

std::size_t PoolModel::in_features() const {
  return gnn.empty() ? mlp.layers.front().weight.rows() : gnn.front().in_width();
}

PoolModel make_pool_model(const PoolModelConfig& config, std::mt19937_64& rng) {
  if (config.in_features == 0) throw ParameterError("pool model needs at least one input feature");
  if (config.k < 2) throw ParameterError("pool model needs k >= 2");
  PoolModel model;
  model.k = config.k;
  model.temperature = config.temperature;
  std::size_t width = config.in_features;
  for (std::size_t w : config.gnn_widths) {
    model.gnn.push_back(make_mp_layer(width, w, config.gnn_activation, rng));
    width = w;
  }
  model.mlp.hidden_activation = config.mlp_hidden_activation;
  for (std::size_t w : config.mlp_hidden) {
    model.mlp.layers.push_back(make_dense_layer(width, w, rng));
    width = w;
  }
  model.mlp.layers.push_back(make_dense_layer(width, config.k, rng));
  model.validate();
  return model;
}

std::vector<DenseMatrix*> parameters(PoolModel& model) {
  std::vector<DenseMatrix*> out;
  for (auto& layer : model.gnn) append_parameters(layer, out);
  for (auto& layer : model.mlp.layers) append_parameters(layer, out);
  return out;
}

BoundPoolModel bind(ParameterBinder& binder, const PoolModel& model) {
  model.validate();
  BoundPoolModel b;
  for (const auto& layer : model.gnn) b.gnn.push_back(binder.bind(layer));
  for (const auto& layer : model.mlp.layers) b.mlp.push_back(binder.bind(layer));
  b.hidden_activation = model.mlp.hidden_activation;
  b.k = model.k;
  b.temperature = model.temperature;
  return b;
}

Var gnn_forward(const Var& x, const SparseMatrix& a_tilde, const BoundPoolModel& model) {
  Var h = x;
  for (const auto& layer : model.gnn) h = mp_forward(h, a_tilde, layer);
  return h;
}

Var assignment_head(const Var& embeddings, const BoundPoolModel& model) {
  Var h = embeddings;
  for (std::size_t i = 0; i < model.mlp.size(); ++i) {
    const bool last = i + 1 == model.mlp.size();
    h = dense_forward(h, model.mlp[i], last ? Activation::kLinear : model.hidden_activation);
  }
  return softmax_rows(h, model.temperature);
}

Var compute_assignments(const Var& x, const SparseMatrix& a_tilde, const BoundPoolModel& model) {
  return assignment_head(gnn_forward(x, a_tilde, model), model);
}

namespace {

Var cut_ratio(const Var& numerator, const Var& denominator) {
  if (!(denominator.value().scalar() > 0.0)) {
    throw DegenerateInputError("cut loss: Tr(S^T D S) is zero (graph has no edges)");
  }
  return scale(divide(numerator, denominator), -1.0);
}

}  // namespace

Var cut_loss(const Var& s, const NormalizedAdjacency& a_tilde) {
  if (s.rows() != a_tilde.matrix.rows()) {
    throw ShapeError("cut_loss: assignment " + s.value().shape_string() + " for " +
                     std::to_string(a_tilde.matrix.rows()) + " nodes");
  }
  if (a_tilde.matrix.nnz() == 0) {
    throw DegenerateInputError("cut loss: graph has no edges");
  }
  Tape& tape = s.tape();
  const Var st = transpose(s);
  const Var numerator = trace(matmul(st, spmm(a_tilde.matrix, s)));
  const Var degrees = tape.constant(DenseMatrix::column(a_tilde.tilde_degrees));
  const Var denominator = trace(matmul(st, scale_rows(s, degrees)));
  return cut_ratio(numerator, denominator);
}

Var cut_loss(const Var& s, const Var& a_tilde) {
  const Var st = transpose(s);
  const Var numerator = trace(matmul(st, matmul(a_tilde, s)));
  const Var denominator = trace(matmul(st, scale_rows(s, row_sums(a_tilde))));
  return cut_ratio(numerator, denominator);
}

Var ortho_loss(const Var& s) {
  Tape& tape = s.tape();
  const std::size_t k = s.cols();
  const Var sts = matmul(transpose(s), s);
  const Var inv_norm = divide(tape.constant(DenseMatrix(1, 1, 1.0)), frobenius_norm(sts));
  const Var target =
      tape.constant(scale(DenseMatrix::identity(k), 1.0 / std::sqrt(static_cast<double>(k))));
  return frobenius_norm(subtract(scalar_multiply(inv_norm, sts), target));
}

Var unsupervised_loss(const Var& s, const NormalizedAdjacency& a_tilde) {
  return add(cut_loss(s, a_tilde), ortho_loss(s));
}

Var unsupervised_loss(const Var& s, const Var& a_tilde) {
  return add(cut_loss(s, a_tilde), ortho_loss(s));
}

RatioTraceVars cut_loss_ratio_trace(const Var& s, const SparseMatrix& a,
                                    const std::vector<double>& degrees) {
  if (degrees.size() != s.rows() || a.rows() != s.rows()) {
    throw ShapeError("cut_loss_ratio_trace: inputs disagree on node count");
  }
  Tape& tape = s.tape();
  const Var st = transpose(s);
  const Var sas = matmul(st, spmm(a, s));
  const Var sds = matmul(st, scale_rows(s, tape.constant(DenseMatrix::column(degrees))));
  Var sds_inv;
  try {
    sds_inv = inverse(sds);
  } catch (const DegenerateInputError&) {
    throw DegenerateInputError(
        "ratio trace: S^T D S is singular (a cluster has no degree mass)");
  }
  RatioTraceVars out;
  out.raw = trace(matmul(sds_inv, sas));
  out.aligned = scale(out.raw, -1.0 / static_cast<double>(s.cols()));
  return out;
}

namespace {

PooledVars finish_coarsen(const Var& a_pool, const Var& x_pool) {
  const Var a_hat = zero_diagonal(a_pool);
  bool degenerate = true;
  for (double v : a_hat.value().values()) {
    if (v != 0.0) {
      degenerate = false;
      break;
    }
  }
  if (degenerate) diagnostics::note_degenerate_pooled_graph();
  const Var d = inverse_sqrt_or_zero(row_sums(a_hat));
  return {a_pool, scale_cols(scale_rows(a_hat, d), d), x_pool};
}

}  // namespace

PooledVars coarsen(const Var& s, const SparseMatrix& a_tilde, const Var& x) {
  if (x.rows() != s.rows() || a_tilde.rows() != s.rows()) {
    throw ShapeError("coarsen: assignment " + s.value().shape_string() + ", features " +
                     x.value().shape_string() + ", adjacency rows " +
                     std::to_string(a_tilde.rows()));
  }
  const Var st = transpose(s);
  return finish_coarsen(matmul(st, spmm(a_tilde, s)), matmul(st, x));
}

PooledVars coarsen(const Var& s, const Var& a_tilde, const Var& x) {
  if (x.rows() != s.rows()) {
    throw ShapeError("coarsen: assignment " + s.value().shape_string() + " vs features " +
                     x.value().shape_string());
  }
  const Var st = transpose(s);
  return finish_coarsen(matmul(st, matmul(a_tilde, s)), matmul(st, x));
}

UnpooledVars unpool(const Var& s, const Var& x_pool, const Var& a_pool) {
  return {matmul(s, x_pool), matmul(matmul(s, a_pool), transpose(s))};
}

// ---- value forms ----------------------------------------------------------

DenseMatrix mp_forward(const DenseMatrix& x, const NormalizedAdjacency& a_tilde,
                       const MpLayerParams& p) {
  Tape tape;
  BoundMpLayer b{tape.constant(p.theta_m), tape.constant(p.theta_s), p.activation};
  if (p.theta_m.rows() != p.theta_s.rows() || p.theta_m.cols() != p.theta_s.cols()) {
    throw ShapeError("MP layer: mixing and skip weights differ in shape");
  }
  return mp_forward(tape.constant(x), a_tilde.matrix, b).value();
}

SoftAssignment compute_assignments(const DenseMatrix& x, const NormalizedAdjacency& a_tilde,
                                   const PoolModel& model) {
  Tape tape;
  ParameterBinder binder(tape);
  const BoundPoolModel b = bind(binder, model);
  return {compute_assignments(tape.constant(x), a_tilde.matrix, b).value()};
}

double cut_loss(const DenseMatrix& s, const NormalizedAdjacency& a_tilde) {
  Tape tape;
  return cut_loss(tape.constant(s), a_tilde).value().scalar();
}

double cut_loss_dense(const DenseMatrix& s, const DenseMatrix& a_tilde) {
  Tape tape;
  return cut_loss(tape.constant(s), tape.constant(a_tilde)).value().scalar();
}

double ortho_loss(const DenseMatrix& s) {
  Tape tape;
  return ortho_loss(tape.constant(s)).value().scalar();
}

double unsupervised_loss(const DenseMatrix& s, const NormalizedAdjacency& a_tilde) {
  Tape tape;
  return unsupervised_loss(tape.constant(s), a_tilde).value().scalar();
}

RatioTraceValue cut_loss_ratio_trace(const DenseMatrix& s, const SparseMatrix& a,
                                     const std::vector<double>& degrees) {
  Tape tape;
  const RatioTraceVars v = cut_loss_ratio_trace(tape.constant(s), a, degrees);
  return {v.raw.value().scalar(), v.aligned.value().scalar()};
}

PooledGraph coarsen(const DenseMatrix& s, const NormalizedAdjacency& a_tilde, const DenseMatrix& x) {
  Tape tape;
  const PooledVars v = coarsen(tape.constant(s), a_tilde.matrix, tape.constant(x));
  return {v.a_pool.value(), v.a_tilde_pool.value(), v.x_pool.value()};
}

std::pair<DenseMatrix, DenseMatrix> unpool(const DenseMatrix& s, const DenseMatrix& x_pool,
                                           const DenseMatrix& a_pool) {
  Tape tape;
  const UnpooledVars v = unpool(tape.constant(s), tape.constant(x_pool), tape.constant(a_pool));
  return {v.x_rec.value(), v.a_rec.value()};
}

std::vector<int> hard_labels(const DenseMatrix& s) {
  std::vector<int> labels(s.rows(), 0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto r = s.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j)
      if (r[j] > r[best]) best = j;
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace mincut
