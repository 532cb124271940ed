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

#include "mincut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mincut/errors.hpp"

namespace mincut {

namespace {

void check_lengths(std::span<const int> pred, std::span<const int> truth, const char* op) {
  if (pred.size() != truth.size()) {
    throw ContractError(std::string(op) + ": length mismatch " + std::to_string(pred.size()) +
                        " vs " + std::to_string(truth.size()));
  }
  if (pred.empty()) throw ContractError(std::string(op) + ": empty labelings");
}

// Summation order follows the sorted terms, so results do not depend on
// how cluster or class ids are numbered.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double entropy(const std::vector<std::size_t>& counts, double total) {
  std::vector<double> terms;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    terms.push_back(-p * std::log(p));
  }
  return sorted_sum(std::move(terms));
}

struct Entropies {
  double h_pred = 0.0;
  double h_truth = 0.0;
  double h_pred_given_truth = 0.0;
  double mutual_information = 0.0;
};

Entropies entropies(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total);
  const std::size_t rows = t.counts.size();
  const std::size_t cols = rows ? t.counts[0].size() : 0;
  std::vector<std::size_t> row_tot(rows, 0), col_tot(cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_tot[i] += t.counts[i][j];
      col_tot[j] += t.counts[i][j];
    }
  Entropies e;
  e.h_pred = entropy(row_tot, n);
  e.h_truth = entropy(col_tot, n);
  std::vector<double> cond, mi;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t c = t.counts[i][j];
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      cond.push_back(-p * std::log(static_cast<double>(c) / static_cast<double>(col_tot[j])));
      const double outer = static_cast<double>(row_tot[i]) * static_cast<double>(col_tot[j]);
      mi.push_back(p * std::log(static_cast<double>(c) * n / outer));
    }
  e.h_pred_given_truth = sorted_sum(std::move(cond));
  e.mutual_information = sorted_sum(std::move(mi));
  return e;
}

// Each predicted cluster meets exactly one class and vice versa.
bool is_bijection(const ContingencyTable& t) {
  const std::size_t rows = t.counts.size();
  const std::size_t cols = rows ? t.counts[0].size() : 0;
  if (rows != cols) return false;
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t nz = 0;
    for (std::size_t j = 0; j < cols; ++j) nz += t.counts[i][j] != 0;
    if (nz != 1) return false;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t nz = 0;
    for (std::size_t i = 0; i < rows; ++i) nz += t.counts[i][j] != 0;
    if (nz != 1) return false;
  }
  return true;
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth, "contingency table");
  std::map<int, std::size_t> pi, ti;
  for (int p : pred) pi.emplace(p, 0);
  for (int t : truth) ti.emplace(t, 0);
  std::size_t next = 0;
  for (auto& [id, idx] : pi) idx = next++;
  next = 0;
  for (auto& [id, idx] : ti) idx = next++;
  ContingencyTable table;
  table.counts.assign(pi.size(), std::vector<std::size_t>(ti.size(), 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++table.counts[pi.at(pred[i])][ti.at(truth[i])];
  table.total = pred.size();
  return table;
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable table = ContingencyTable::build(pred, truth);
  if (is_bijection(table)) return 1.0;
  const Entropies e = entropies(table);
  if (e.h_pred == 0.0 || e.h_truth == 0.0) return 0.0;
  return std::clamp(e.mutual_information / std::sqrt(e.h_pred * e.h_truth), 0.0, 1.0);
}

double completeness_score(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable table = ContingencyTable::build(pred, truth);
  const Entropies e = entropies(table);
  if (e.h_pred == 0.0) return 1.0;
  return std::clamp(1.0 - e.h_pred_given_truth / e.h_pred, 0.0, 1.0);
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double mse(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_shape(x, y, "mse");
  if (x.size() == 0) throw ContractError("mse: empty matrices");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.values()[i] - y.values()[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

}  // namespace mincut
