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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "mincut/errors.hpp"
#include "mincut/metrics.hpp"

using namespace mincut;

namespace {

// Entropies from raw counts, independent of the library's table code.
double entropy(const std::vector<int>& x) {
  std::map<int, double> c;
  for (int v : x) c[v] += 1.0;
  double h = 0.0;
  for (const auto& [k, n] : c) h -= n / x.size() * std::log(n / x.size());
  return h;
}

double joint_entropy(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<std::pair<int, int>, double> c;
  for (std::size_t i = 0; i < x.size(); ++i) c[{x[i], y[i]}] += 1.0;
  double h = 0.0;
  for (const auto& [k, n] : c) h -= n / x.size() * std::log(n / x.size());
  return h;
}

}  // namespace

TEST_CASE("contingency table counts") {
  const std::vector<int> pred{0, 0, 1, 1, 1};
  const std::vector<int> truth{5, 7, 7, 7, 5};
  const ContingencyTable t = ContingencyTable::build(pred, truth);
  CHECK(t.total == 5);
  CHECK(t.counts == std::vector<std::vector<std::size_t>>{{1, 1}, {1, 2}});
}

TEST_CASE("nmi examples") {
  const std::vector<int> a{0, 0, 1, 1, 2, 2};
  CHECK(nmi(a, a) == 1.0);
  CHECK(nmi(std::vector<int>{3, 3, 3, 3, 3, 3}, a) == 0.0);
  CHECK(nmi(std::vector<int>{2, 2, 0, 0, 1, 1}, a) == 1.0);
  CHECK_THROWS_AS(nmi(std::vector<int>{0, 1}, a), ContractError);
  CHECK_THROWS_AS(nmi(std::vector<int>{}, std::vector<int>{}), ContractError);
}

TEST_CASE("completeness examples") {
  const std::vector<int> truth{0, 0, 1, 1};
  CHECK(completeness_score(truth, truth) == 1.0);
  CHECK(completeness_score(std::vector<int>{0, 0, 0, 0}, truth) == 1.0);
  const std::vector<int> singletons{0, 1, 2, 3};
  const double cs = completeness_score(singletons, truth);
  const double oracle = 1.0 - (joint_entropy(singletons, truth) - entropy(truth)) / entropy(singletons);
  CHECK(cs > 0.0);
  CHECK(cs < 1.0);
  CHECK(std::abs(cs - oracle) <= 1e-12);
}

TEST_CASE("accuracy and mse") {
  const std::vector<int> a{0, 1, 1, 0};
  CHECK(accuracy(a, a) == 1.0);
  CHECK(accuracy(a, std::vector<int>{1, 0, 0, 1}) == 0.0);
  CHECK(mse(DenseMatrix{{0, 0}}, DenseMatrix{{3, 4}}) == 12.5);
  CHECK(mse(DenseMatrix{{1, 2}}, DenseMatrix{{1, 2}}) == 0.0);
}

TEST_CASE("fuzz: bounds, oracle agreement, symmetry, relabeling invariance") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 40;
    const int kp = 1 + static_cast<int>(rng() % 6), kt = 1 + static_cast<int>(rng() % 6);
    std::vector<int> pred(n), truth(n);
    for (auto& v : pred) v = static_cast<int>(rng() % kp);
    for (auto& v : truth) v = static_cast<int>(rng() % kt);

    const double v = nmi(pred, truth);
    const double c = completeness_score(pred, truth);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    CHECK(nmi(truth, pred) == v);

    const double hp = entropy(pred), ht = entropy(truth);
    if (hp > 0.0 && ht > 0.0) {
      const double mi = hp + ht - joint_entropy(pred, truth);
      CHECK(std::abs(v - mi / std::sqrt(hp * ht)) <= 1e-12);
      CHECK(std::abs(c - (1.0 - (joint_entropy(pred, truth) - ht) / hp)) <= 1e-12);
    }

    std::vector<int> perm_p(kp), perm_t(kt);
    for (int i = 0; i < kp; ++i) perm_p[i] = 10 * (kp - i);
    for (int i = 0; i < kt; ++i) perm_t[i] = 7 * ((i + 2) % kt) - 3;
    std::vector<int> rp(n), rt(n);
    for (std::size_t i = 0; i < n; ++i) {
      rp[i] = perm_p[pred[i]];
      rt[i] = perm_t[truth[i]];
    }
    CHECK(nmi(rp, rt) == v);
    CHECK(completeness_score(rp, rt) == c);
  }
}
