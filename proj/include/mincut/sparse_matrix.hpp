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

#include <cstddef>
#include <vector>

#include "mincut/dense_matrix.hpp"

namespace mincut {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// COO matrix with entries kept sorted by (row, col) and no duplicates.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  // Sorts the entries; throws DataError on out-of-range or duplicate indices.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries);

  static SparseMatrix from_dense(const DenseMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  DenseMatrix densify() const;
  SparseMatrix transposed() const;
  bool is_symmetric(double tol = 0.0) const;
  std::vector<double> row_sums() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseEntry> entries_;
};

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& b);

}  // namespace mincut
