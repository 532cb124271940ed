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

#include "mincut/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mincut/errors.hpp"

namespace mincut {

namespace {

bool entry_less(const SparseEntry& a, const SparseEntry& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), entry_less);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.row >= rows_ || e.col >= cols_) {
      throw DataError("sparse entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                      ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col) {
      throw DataError("duplicate sparse entry (" + std::to_string(e.row) + ", " +
                      std::to_string(e.col) + ")");
    }
  }
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) entries.push_back({i, j, m(i, j)});
  return SparseMatrix(m.rows(), m.cols(), std::move(entries));
}

DenseMatrix SparseMatrix::densify() const {
  DenseMatrix out(rows_, cols_);
  for (const auto& e : entries_) out(e.row, e.col) = e.value;
  return out;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<SparseEntry> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
  return SparseMatrix(cols_, rows_, std::move(t));
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  const SparseMatrix t = transposed();
  if (t.entries_.size() != entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& a = entries_[i];
    const auto& b = t.entries_[i];
    if (a.row != b.row || a.col != b.col || std::abs(a.value - b.value) > tol) return false;
  }
  return true;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (const auto& e : entries_) sums[e.row] += e.value;
  return sums;
}

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& b) {
  if (s.cols() != b.rows()) {
    throw ShapeError("spmm: cannot multiply " + std::to_string(s.rows()) + "x" +
                     std::to_string(s.cols()) + " sparse by " + b.shape_string());
  }
  DenseMatrix out(s.rows(), b.cols());
  for (const auto& e : s.entries()) {
    auto o = out.row(e.row);
    const auto br = b.row(e.col);
    for (std::size_t j = 0; j < o.size(); ++j) o[j] += e.value * br[j];
  }
  return out;
}

}  // namespace mincut
