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

#include "mincut/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mincut/diagnostics.hpp"
#include "mincut/errors.hpp"

namespace mincut {

const DenseMatrix& Var::value() const { return tape_->value(id_); }

void BackwardContext::accumulate(std::size_t slot, const DenseMatrix& grad) {
  if (!needs_[slot]) return;
  DenseMatrix& target = *targets_[slot];
  if (target.empty() && grad.size() != 0) {
    target = grad;
  } else {
    target += grad;
  }
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::variable(DenseMatrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::constant(DenseMatrix value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::record(DenseMatrix value, std::initializer_list<Var> inputs, BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericError("non-finite value produced by a recorded operation (" +
                       value.shape_string() + ")");
  }
  Node n;
  n.value = std::move(value);
  n.backward = std::move(backward);
  for (const Var& v : inputs) {
    if (&v.tape() != this) throw ContractError("operands recorded on different tapes");
    n.inputs.push_back(v.id());
    n.requires_grad = n.requires_grad || nodes_[v.id()].requires_grad;
  }
  return push(std::move(n));
}

Gradients Tape::backward(const Var& loss) const {
  if (&loss.tape() != this) throw ContractError("backward: loss recorded on another tape");
  const DenseMatrix& lv = loss.value();
  if (!lv.is_scalar()) {
    throw ContractError("backward: loss must be 1x1, got " + lv.shape_string());
  }
  Gradients out;
  out.grads_.resize(nodes_.size());
  out.grads_[loss.id()] = DenseMatrix(1, 1, 1.0);

  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    const Node& node = nodes_[id];
    if (!node.requires_grad || node.inputs.empty() || out.grads_[id].empty()) continue;
    BackwardContext ctx;
    ctx.needs_.reserve(node.inputs.size());
    for (std::size_t in : node.inputs) {
      ctx.needs_.push_back(nodes_[in].requires_grad);
      ctx.targets_.push_back(&out.grads_[in]);
    }
    node.backward(out.grads_[id], ctx);
  }

  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (out.grads_[id].empty() && nodes_[id].value.size() != 0) {
      out.grads_[id] = DenseMatrix(nodes_[id].value.rows(), nodes_[id].value.cols());
    }
  }
  return out;
}

namespace {

void require_scalar(const Var& v, const char* op) {
  if (!v.value().is_scalar()) {
    throw ShapeError(std::string(op) + ": expected 1x1 operand, got " + v.value().shape_string());
  }
}

DenseMatrix map_values(const DenseMatrix& m, auto&& fn) {
  DenseMatrix out = m;
  for (double& v : out.values()) v = fn(v);
  return out;
}

// grad ⊙ f'(input), elementwise.
DenseMatrix chain_elementwise(const DenseMatrix& grad, const DenseMatrix& input, auto&& dfn) {
  DenseMatrix out(input.rows(), input.cols());
  auto o = out.values();
  auto g = grad.values();
  auto x = input.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = g[i] * dfn(x[i]);
  return out;
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  return a.tape().record(matmul(a.value(), b.value()), {a, b},
                         [a, b](const DenseMatrix& g, BackwardContext& ctx) {
                           if (ctx.needs(0)) ctx.accumulate(0, matmul_nt(g, b.value()));
                           if (ctx.needs(1)) ctx.accumulate(1, matmul_tn(a.value(), g));
                         });
}

Var spmm(const SparseMatrix& s, const Var& b) {
  return b.tape().record(spmm(s, b.value()), {b},
                         [entries = s.entries(), n = s.cols()](const DenseMatrix& g,
                                                               BackwardContext& ctx) {
                           DenseMatrix db(n, g.cols());
                           for (const auto& e : entries) {
                             auto dst = db.row(e.col);
                             const auto src = g.row(e.row);
                             for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += e.value * src[j];
                           }
                           ctx.accumulate(0, db);
                         });
}

Var transpose(const Var& m) {
  return m.tape().record(transpose(m.value()), {m},
                         [](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, transpose(g));
                         });
}

Var add(const Var& a, const Var& b) {
  return a.tape().record(add(a.value(), b.value()), {a, b},
                         [](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, g);
                           ctx.accumulate(1, g);
                         });
}

Var subtract(const Var& a, const Var& b) {
  return a.tape().record(subtract(a.value(), b.value()), {a, b},
                         [](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, g);
                           if (ctx.needs(1)) ctx.accumulate(1, scale(g, -1.0));
                         });
}

Var scale(const Var& m, double factor) {
  return m.tape().record(scale(m.value(), factor), {m},
                         [factor](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, scale(g, factor));
                         });
}

Var hadamard(const Var& a, const Var& b) {
  return a.tape().record(hadamard(a.value(), b.value()), {a, b},
                         [a, b](const DenseMatrix& g, BackwardContext& ctx) {
                           if (ctx.needs(0)) ctx.accumulate(0, hadamard(g, b.value()));
                           if (ctx.needs(1)) ctx.accumulate(1, hadamard(g, a.value()));
                         });
}

Var trace(const Var& m) {
  const double t = trace(m.value());
  return m.tape().record(DenseMatrix(1, 1, t), {m},
                         [n = m.rows()](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, scale(DenseMatrix::identity(n), g.scalar()));
                         });
}

Var frobenius_norm(const Var& m) {
  const double norm = frobenius_norm(m.value());
  return m.tape().record(DenseMatrix(1, 1, norm), {m},
                         [m, norm](const DenseMatrix& g, BackwardContext& ctx) {
                           if (norm == 0.0) {
                             diagnostics::note_frobenius_zero_gradient();
                             ctx.accumulate(0, DenseMatrix(m.rows(), m.cols()));
                             return;
                           }
                           ctx.accumulate(0, scale(m.value(), g.scalar() / norm));
                         });
}

Var sum(const Var& m) {
  return m.tape().record(DenseMatrix(1, 1, sum(m.value())), {m},
                         [r = m.rows(), c = m.cols()](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, DenseMatrix(r, c, g.scalar()));
                         });
}

Var sum_squares(const Var& m) {
  double s = 0.0;
  for (double v : m.value().values()) s += v * v;
  return m.tape().record(DenseMatrix(1, 1, s), {m},
                         [m](const DenseMatrix& g, BackwardContext& ctx) {
                           ctx.accumulate(0, scale(m.value(), 2.0 * g.scalar()));
                         });
}

Var relu(const Var& m) {
  return m.tape().record(relu(m.value()), {m}, [m](const DenseMatrix& g, BackwardContext& ctx) {
    ctx.accumulate(0, chain_elementwise(g, m.value(), [](double x) { return x > 0.0 ? 1.0 : 0.0; }));
  });
}

Var elu(const Var& m) {
  return m.tape().record(elu(m.value()), {m}, [m](const DenseMatrix& g, BackwardContext& ctx) {
    ctx.accumulate(0, chain_elementwise(g, m.value(),
                                        [](double x) { return x > 0.0 ? 1.0 : std::exp(x); }));
  });
}

Var tanh(const Var& m) {
  DenseMatrix y = map_values(m.value(), [](double x) { return std::tanh(x); });
  return m.tape().record(y, {m}, [y](const DenseMatrix& g, BackwardContext& ctx) {
    ctx.accumulate(0, chain_elementwise(g, y, [](double t) { return 1.0 - t * t; }));
  });
}

Var softmax_rows(const Var& m, double tau) {
  DenseMatrix y = softmax_rows_with_temperature(m.value(), tau);
  return m.tape().record(y, {m}, [y, tau](const DenseMatrix& g, BackwardContext& ctx) {
    DenseMatrix dm(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
      const auto yr = y.row(i);
      const auto gr = g.row(i);
      double dot = 0.0;
      for (std::size_t j = 0; j < yr.size(); ++j) dot += gr[j] * yr[j];
      auto d = dm.row(i);
      for (std::size_t j = 0; j < yr.size(); ++j) d[j] = yr[j] * (gr[j] - dot) / tau;
    }
    ctx.accumulate(0, dm);
  });
}

Var add_row_vector(const Var& m, const Var& row) {
  const DenseMatrix& mv = m.value();
  const DenseMatrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != mv.cols()) {
    throw ShapeError("add_row_vector: cannot broadcast " + rv.shape_string() + " onto " +
                     mv.shape_string());
  }
  DenseMatrix out = mv;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += rv(0, j);
  }
  return m.tape().record(std::move(out), {m, row}, [](const DenseMatrix& g, BackwardContext& ctx) {
    ctx.accumulate(0, g);
    if (ctx.needs(1)) {
      DenseMatrix db(1, g.cols());
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) db(0, j) += g(i, j);
      ctx.accumulate(1, db);
    }
  });
}

Var scale_rows(const Var& m, const Var& v) {
  const DenseMatrix& mv = m.value();
  const DenseMatrix& vv = v.value();
  if (vv.cols() != 1 || vv.rows() != mv.rows()) {
    throw ShapeError("scale_rows: scale vector " + vv.shape_string() + " for " +
                     mv.shape_string());
  }
  DenseMatrix out = mv;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& x : out.row(i)) x *= vv(i, 0);
  return m.tape().record(std::move(out), {m, v}, [m, v](const DenseMatrix& g, BackwardContext& ctx) {
    const DenseMatrix& mv = m.value();
    const DenseMatrix& vv = v.value();
    if (ctx.needs(0)) {
      DenseMatrix dm = g;
      for (std::size_t i = 0; i < dm.rows(); ++i)
        for (double& x : dm.row(i)) x *= vv(i, 0);
      ctx.accumulate(0, dm);
    }
    if (ctx.needs(1)) {
      DenseMatrix dv(vv.rows(), 1);
      for (std::size_t i = 0; i < mv.rows(); ++i)
        for (std::size_t j = 0; j < mv.cols(); ++j) dv(i, 0) += g(i, j) * mv(i, j);
      ctx.accumulate(1, dv);
    }
  });
}

Var scale_cols(const Var& m, const Var& v) {
  const DenseMatrix& mv = m.value();
  const DenseMatrix& vv = v.value();
  if (vv.cols() != 1 || vv.rows() != mv.cols()) {
    throw ShapeError("scale_cols: scale vector " + vv.shape_string() + " for " +
                     mv.shape_string());
  }
  DenseMatrix out = mv;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= vv(j, 0);
  return m.tape().record(std::move(out), {m, v}, [m, v](const DenseMatrix& g, BackwardContext& ctx) {
    const DenseMatrix& mv = m.value();
    const DenseMatrix& vv = v.value();
    if (ctx.needs(0)) {
      DenseMatrix dm = g;
      for (std::size_t i = 0; i < dm.rows(); ++i)
        for (std::size_t j = 0; j < dm.cols(); ++j) dm(i, j) *= vv(j, 0);
      ctx.accumulate(0, dm);
    }
    if (ctx.needs(1)) {
      DenseMatrix dv(vv.rows(), 1);
      for (std::size_t i = 0; i < mv.rows(); ++i)
        for (std::size_t j = 0; j < mv.cols(); ++j) dv(j, 0) += g(i, j) * mv(i, j);
      ctx.accumulate(1, dv);
    }
  });
}

Var row_sums(const Var& m) {
  const DenseMatrix& mv = m.value();
  DenseMatrix out(mv.rows(), 1);
  for (std::size_t i = 0; i < mv.rows(); ++i)
    for (double x : mv.row(i)) out(i, 0) += x;
  return m.tape().record(std::move(out), {m},
                         [c = mv.cols()](const DenseMatrix& g, BackwardContext& ctx) {
                           DenseMatrix dm(g.rows(), c);
                           for (std::size_t i = 0; i < g.rows(); ++i)
                             for (double& x : dm.row(i)) x = g(i, 0);
                           ctx.accumulate(0, dm);
                         });
}

Var mean_rows(const Var& m) {
  const DenseMatrix& mv = m.value();
  if (mv.rows() == 0) throw ShapeError("mean_rows: matrix has no rows");
  const double inv_n = 1.0 / static_cast<double>(mv.rows());
  DenseMatrix out(1, mv.cols());
  for (std::size_t i = 0; i < mv.rows(); ++i)
    for (std::size_t j = 0; j < mv.cols(); ++j) out(0, j) += mv(i, j);
  for (double& x : out.values()) x *= inv_n;
  return m.tape().record(std::move(out), {m},
                         [r = mv.rows(), inv_n](const DenseMatrix& g, BackwardContext& ctx) {
                           DenseMatrix dm(r, g.cols());
                           for (std::size_t i = 0; i < r; ++i)
                             for (std::size_t j = 0; j < g.cols(); ++j) dm(i, j) = g(0, j) * inv_n;
                           ctx.accumulate(0, dm);
                         });
}

Var inverse_sqrt_or_zero(const Var& m) {
  DenseMatrix y = map_values(m.value(), [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
  return m.tape().record(y, {m}, [m](const DenseMatrix& g, BackwardContext& ctx) {
    ctx.accumulate(0, chain_elementwise(g, m.value(), [](double x) {
                     return x > 0.0 ? -0.5 / (x * std::sqrt(x)) : 0.0;
                   }));
  });
}

Var zero_diagonal(const Var& m) {
  DenseMatrix out = m.value();
  if (out.rows() != out.cols()) throw ShapeError("zero_diagonal: matrix is " + out.shape_string());
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) = 0.0;
  return m.tape().record(std::move(out), {m}, [](const DenseMatrix& g, BackwardContext& ctx) {
    DenseMatrix dm = g;
    for (std::size_t i = 0; i < dm.rows(); ++i) dm(i, i) = 0.0;
    ctx.accumulate(0, dm);
  });
}

Var divide(const Var& numerator, const Var& denominator) {
  require_scalar(numerator, "divide");
  require_scalar(denominator, "divide");
  const double a = numerator.value().scalar();
  const double b = denominator.value().scalar();
  if (b == 0.0) throw NumericError("divide: zero denominator");
  return numerator.tape().record(DenseMatrix(1, 1, a / b), {numerator, denominator},
                                 [a, b](const DenseMatrix& g, BackwardContext& ctx) {
                                   const double gs = g.scalar();
                                   ctx.accumulate(0, DenseMatrix(1, 1, gs / b));
                                   ctx.accumulate(1, DenseMatrix(1, 1, -gs * a / (b * b)));
                                 });
}

Var scalar_multiply(const Var& s, const Var& m) {
  require_scalar(s, "scalar_multiply");
  const double sv = s.value().scalar();
  return s.tape().record(scale(m.value(), sv), {s, m},
                         [m, sv](const DenseMatrix& g, BackwardContext& ctx) {
                           if (ctx.needs(0)) {
                             ctx.accumulate(0, DenseMatrix(1, 1, sum(hadamard(g, m.value()))));
                           }
                           if (ctx.needs(1)) ctx.accumulate(1, scale(g, sv));
                         });
}

Var inverse(const Var& m) {
  DenseMatrix inv = inverse(m.value());
  return m.tape().record(inv, {m}, [inv](const DenseMatrix& g, BackwardContext& ctx) {
    // d(M^-1) = -M^-T G M^-T
    const DenseMatrix inv_t = transpose(inv);
    ctx.accumulate(0, scale(matmul(matmul(inv_t, g), inv_t), -1.0));
  });
}

Var gather_rows(const Var& m, std::span<const std::size_t> indices) {
  const DenseMatrix& mv = m.value();
  DenseMatrix out(indices.size(), mv.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= mv.rows()) {
      throw ShapeError("gather_rows: index " + std::to_string(indices[r]) + " out of " +
                       std::to_string(mv.rows()) + " rows");
    }
    std::copy_n(mv.row(indices[r]).begin(), mv.cols(), out.row(r).begin());
  }
  return m.tape().record(
      std::move(out), {m},
      [idx = std::vector<std::size_t>(indices.begin(), indices.end()), n = mv.rows()](
          const DenseMatrix& g, BackwardContext& ctx) {
        DenseMatrix dm(n, g.cols());
        for (std::size_t r = 0; r < idx.size(); ++r) {
          auto dst = dm.row(idx[r]);
          const auto src = g.row(r);
          for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
        }
        ctx.accumulate(0, dm);
      });
}

Var scatter_rows(const Var& m, std::span<const std::size_t> indices, std::size_t n) {
  const DenseMatrix& mv = m.value();
  if (indices.size() != mv.rows()) {
    throw ShapeError("scatter_rows: " + std::to_string(indices.size()) + " indices for " +
                     mv.shape_string());
  }
  std::vector<bool> seen(n, false);
  DenseMatrix out(n, mv.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= n) throw ShapeError("scatter_rows: index out of range");
    if (seen[indices[r]]) throw ContractError("scatter_rows: duplicate target index");
    seen[indices[r]] = true;
    std::copy_n(mv.row(r).begin(), mv.cols(), out.row(indices[r]).begin());
  }
  return m.tape().record(
      std::move(out), {m},
      [idx = std::vector<std::size_t>(indices.begin(), indices.end())](const DenseMatrix& g,
                                                                        BackwardContext& ctx) {
        DenseMatrix dm(idx.size(), g.cols());
        for (std::size_t r = 0; r < idx.size(); ++r)
          std::copy_n(g.row(idx[r]).begin(), g.cols(), dm.row(r).begin());
        ctx.accumulate(0, dm);
      });
}

Var softmax_cross_entropy(const Var& logits, std::span<const int> labels) {
  const DenseMatrix& z = logits.value();
  if (labels.size() != z.rows()) {
    throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                     " labels for " + z.shape_string() + " logits");
  }
  if (z.rows() == 0) throw ShapeError("softmax_cross_entropy: no rows");
  const DenseMatrix p = softmax_rows(z);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= z.cols()) {
      throw ContractError("softmax_cross_entropy: label " + std::to_string(y) + " out of range");
    }
    const auto zr = z.row(i);
    const double mx = *std::max_element(zr.begin(), zr.end());
    double lse = 0.0;
    for (double v : zr) lse += std::exp(v - mx);
    loss += std::log(lse) + mx - zr[static_cast<std::size_t>(y)];
  }
  const double inv_n = 1.0 / static_cast<double>(z.rows());
  return logits.tape().record(
      DenseMatrix(1, 1, loss * inv_n), {logits},
      [p, y = std::vector<int>(labels.begin(), labels.end()), inv_n](const DenseMatrix& g,
                                                                     BackwardContext& ctx) {
        DenseMatrix dz = p;
        for (std::size_t i = 0; i < dz.rows(); ++i) dz(i, static_cast<std::size_t>(y[i])) -= 1.0;
        ctx.accumulate(0, scale(dz, g.scalar() * inv_n));
      });
}

Var mean_row_entropy(const Var& p) {
  const DenseMatrix& pv = p.value();
  if (pv.rows() == 0) throw ShapeError("mean_row_entropy: no rows");
  double h = 0.0;
  for (double x : pv.values())
    if (x > 0.0) h -= x * std::log(x);
  const double inv_n = 1.0 / static_cast<double>(pv.rows());
  return p.tape().record(DenseMatrix(1, 1, h * inv_n), {p},
                         [p, inv_n](const DenseMatrix& g, BackwardContext& ctx) {
                           const double gs = g.scalar() * inv_n;
                           ctx.accumulate(0, map_values(p.value(), [gs](double x) {
                                            return x > 0.0 ? -gs * (std::log(x) + 1.0) : 0.0;
                                          }));
                         });
}

}  // namespace mincut
