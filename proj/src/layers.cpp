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

#include "mincut/layers.hpp"

#include <cmath>

#include "mincut/errors.hpp"

namespace mincut {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kElu: return "elu";
  }
  return "linear";
}

Activation activation_from_string(const std::string& name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "relu") return Activation::kRelu;
  if (name == "elu") return Activation::kElu;
  throw ParameterError("unknown activation '" + name + "'");
}

Var apply_activation(const Var& x, Activation a) {
  switch (a) {
    case Activation::kRelu: return relu(x);
    case Activation::kElu: return elu(x);
    case Activation::kLinear: break;
  }
  return x;
}

DenseMatrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-limit, limit);
  DenseMatrix w(fan_in, fan_out);
  for (double& v : w.values()) v = u(rng);
  return w;
}

MpLayerParams make_mp_layer(std::size_t in, std::size_t out, Activation a, std::mt19937_64& rng) {
  MpLayerParams p;
  p.theta_m = glorot_uniform(in, out, rng);
  p.theta_s = glorot_uniform(in, out, rng);
  p.activation = a;
  return p;
}

DenseLayerParams make_dense_layer(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  return {glorot_uniform(in, out, rng), DenseMatrix(1, out)};
}

Var ParameterBinder::bind(const DenseMatrix& m) {
  vars_.push_back(tape_->variable(m));
  return vars_.back();
}

BoundMpLayer ParameterBinder::bind(const MpLayerParams& p) {
  if (p.theta_m.rows() != p.theta_s.rows() || p.theta_m.cols() != p.theta_s.cols()) {
    throw ShapeError("MP layer: mixing " + p.theta_m.shape_string() + " vs skip " +
                     p.theta_s.shape_string());
  }
  BoundMpLayer b;
  b.theta_m = bind(p.theta_m);
  b.theta_s = bind(p.theta_s);
  b.activation = p.activation;
  return b;
}

BoundDenseLayer ParameterBinder::bind(const DenseLayerParams& p) {
  BoundDenseLayer b;
  b.weight = bind(p.weight);
  b.bias = bind(p.bias);
  return b;
}

void append_parameters(MpLayerParams& p, std::vector<DenseMatrix*>& out) {
  out.push_back(&p.theta_m);
  out.push_back(&p.theta_s);
}

void append_parameters(DenseLayerParams& p, std::vector<DenseMatrix*>& out) {
  out.push_back(&p.weight);
  out.push_back(&p.bias);
}

namespace {

void check_mp_input(const Var& x, const BoundMpLayer& p) {
  if (x.cols() != p.theta_m.rows()) {
    throw ShapeError("mp_forward: features " + x.value().shape_string() + " for weights " +
                     p.theta_m.value().shape_string());
  }
}

}  // namespace

Var mp_forward(const Var& x, const SparseMatrix& a_tilde, const BoundMpLayer& p) {
  check_mp_input(x, p);
  if (a_tilde.rows() != x.rows()) {
    throw ShapeError("mp_forward: adjacency has " + std::to_string(a_tilde.rows()) +
                     " rows for " + std::to_string(x.rows()) + " nodes");
  }
  const Var mixed = spmm(a_tilde, matmul(x, p.theta_m));
  const Var skip = matmul(x, p.theta_s);
  return apply_activation(add(mixed, skip), p.activation);
}

Var mp_forward(const Var& x, const Var& a_tilde, const BoundMpLayer& p) {
  check_mp_input(x, p);
  const Var mixed = matmul(a_tilde, matmul(x, p.theta_m));
  const Var skip = matmul(x, p.theta_s);
  return apply_activation(add(mixed, skip), p.activation);
}

Var dense_forward(const Var& x, const BoundDenseLayer& p, Activation a) {
  return apply_activation(add_row_vector(matmul(x, p.weight), p.bias), a);
}

}  // namespace mincut
