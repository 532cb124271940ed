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
#include <span>
#include <vector>

#include "mincut/dense_matrix.hpp"

namespace mincut {

// counts[i][j]: items with predicted cluster i and true class j. Ids are
// compacted, so rows/cols follow sorted order of the distinct ids seen.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;
  std::size_t total = 0;

  static ContingencyTable build(std::span<const int> pred, std::span<const int> truth);
};

// Mutual information over sqrt(H(pred) * H(truth)), natural log. When either
// labeling is constant the result is 1 if both are, 0 otherwise. Exactly 1
// whenever the labelings are equal up to a relabeling.
// Throws ContractError on length mismatch or empty input.
double nmi(std::span<const int> pred, std::span<const int> truth);

// 1 - H(pred | truth) / H(pred); 1 when pred is constant.
double completeness_score(std::span<const int> pred, std::span<const int> truth);

double accuracy(std::span<const int> pred, std::span<const int> truth);

// Mean of squared entrywise differences.
double mse(const DenseMatrix& x, const DenseMatrix& y);

}  // namespace mincut
