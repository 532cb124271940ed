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

// Define-by-run reverse-mode differentiation over DenseMatrix values.
//
// A Tape records every operation applied to Vars in execution order, so the
// node list is topologically sorted by construction. backward() walks it in
// reverse, calling each node's gradient rule with the upstream gradient.
// A Tape is meant to live for a single forward/backward step and must not be
// shared between threads.

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "mincut/dense_matrix.hpp"
#include "mincut/sparse_matrix.hpp"

namespace mincut {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy.
class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const DenseMatrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Handed to a gradient rule: tells it which inputs need a gradient and
// collects the contributions.
class BackwardContext {
 public:
  bool needs(std::size_t slot) const { return needs_[slot]; }
  void accumulate(std::size_t slot, const DenseMatrix& grad);

 private:
  friend class Tape;
  std::vector<bool> needs_;
  std::vector<DenseMatrix*> targets_;
};

class Gradients {
 public:
  // Gradient of the loss w.r.t. `v`; zero matrix of v's shape if the loss
  // does not depend on it.
  const DenseMatrix& operator[](const Var& v) const { return grads_.at(v.id()); }

 private:
  friend class Tape;
  std::vector<DenseMatrix> grads_;
};

class Tape {
 public:
  using BackwardFn = std::function<void(const DenseMatrix& grad, BackwardContext& ctx)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that receives a gradient.
  Var variable(DenseMatrix value);
  // Leaf that never propagates gradient; backward still reports zeros for it.
  Var constant(DenseMatrix value);

  // Appends an operation node. Throws NumericError if `value` is not finite.
  Var record(DenseMatrix value, std::initializer_list<Var> inputs, BackwardFn backward);

  // `loss` must be 1x1; throws ContractError otherwise.
  Gradients backward(const Var& loss) const;

  const DenseMatrix& value(std::size_t id) const { return nodes_.at(id).value; }
  bool requires_grad(const Var& v) const { return nodes_.at(v.id()).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    DenseMatrix value;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  Var push(Node node);

  // deque keeps element references stable across push_back.
  std::deque<Node> nodes_;
};

// Recorded operations. Every Var argument must live on the same Tape.
Var matmul(const Var& a, const Var& b);
Var spmm(const SparseMatrix& s, const Var& b);
Var transpose(const Var& m);
Var add(const Var& a, const Var& b);
Var subtract(const Var& a, const Var& b);
Var scale(const Var& m, double factor);
Var hadamard(const Var& a, const Var& b);
Var trace(const Var& m);
// d||M||_F = M / ||M||_F; at the zero matrix the gradient is zero and
// diagnostics::frobenius_zero_gradients() is incremented.
Var frobenius_norm(const Var& m);
Var sum(const Var& m);
Var sum_squares(const Var& m);
Var relu(const Var& m);
Var elu(const Var& m);
Var tanh(const Var& m);
Var softmax_rows(const Var& m, double tau = 1.0);

// m (N x C) plus a 1 x C row added to every row.
Var add_row_vector(const Var& m, const Var& row);
// Row i of m scaled by v(i, 0); v is N x 1.
Var scale_rows(const Var& m, const Var& v);
// Column j of m scaled by v(j, 0); v is C x 1.
Var scale_cols(const Var& m, const Var& v);
// N x 1 column of row sums.
Var row_sums(const Var& m);
// 1 x C row of column means.
Var mean_rows(const Var& m);
// x^{-1/2} for x > 0, 0 otherwise (isolated-node convention).
Var inverse_sqrt_or_zero(const Var& m);
Var zero_diagonal(const Var& m);
// Quotient of two 1x1 values.
Var divide(const Var& numerator, const Var& denominator);
// 1x1 value times a matrix.
Var scalar_multiply(const Var& s, const Var& m);
Var inverse(const Var& m);
Var gather_rows(const Var& m, std::span<const std::size_t> indices);
// Inverse of gather_rows: row r of m lands in row indices[r] of an n-row
// result, every other row is zero.
Var scatter_rows(const Var& m, std::span<const std::size_t> indices, std::size_t n);
// Mean over rows of -log softmax(logits)[label].
Var softmax_cross_entropy(const Var& logits, std::span<const int> labels);
// Mean over rows of -sum_j p_ij log p_ij, with 0 log 0 = 0.
Var mean_row_entropy(const Var& p);

}  // namespace mincut
