// Copyright 2026 The mtdist Authors
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

#include "mtdist/assignment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "mtdist/core.hpp"

namespace mtdist {
namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

CostMatrix RandomCost(std::mt19937_64& rng, std::size_t n, std::size_t m, double hi = 10.0) {
  CostMatrix c(n, m);
  std::uniform_real_distribution<double> u(0.0, hi);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) c(i, j) = u(rng);
  }
  return c;
}

// Exhaustive minimum for n <= m: tries every injective row -> column map.
// Returns the first optimum in lexicographic order of the column sequence.
std::pair<double, Pairs> BruteForce(const CostMatrix& c) {
  std::vector<std::size_t> cols(c.cols());
  std::iota(cols.begin(), cols.end(), 0);
  double best = INFINITY;
  Pairs best_pairs;
  std::set<std::vector<std::size_t>> seen;
  do {
    std::vector<std::size_t> prefix(cols.begin(), cols.begin() + c.rows());
    if (!seen.insert(prefix).second) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < c.rows(); ++i) sum += c(i, prefix[i]);
    if (sum < best) {
      best = sum;
      best_pairs.clear();
      for (std::size_t i = 0; i < c.rows(); ++i) best_pairs.emplace_back(i, prefix[i]);
    }
  } while (std::next_permutation(cols.begin(), cols.end()));
  return {best, best_pairs};
}

void ExpectMatching(const Assignment& a, const CostMatrix& c) {
  EXPECT_EQ(a.pairs.size(), std::min(c.rows(), c.cols()));
  std::set<std::size_t> rows, cols;
  double sum = 0.0;
  for (const auto& [i, j] : a.pairs) {
    EXPECT_TRUE(rows.insert(i).second);
    EXPECT_TRUE(cols.insert(j).second);
    sum += c(i, j);
  }
  EXPECT_EQ(a.total_cost, sum);
  EXPECT_EQ(a.unmatched_rows.size() + a.pairs.size(), c.rows());
  EXPECT_EQ(a.unmatched_cols.size() + a.pairs.size(), c.cols());
  EXPECT_TRUE(std::is_sorted(a.pairs.begin(), a.pairs.end()));
}

TEST(SolveAssignmentTest, Trivial) {
  const auto a = solve_assignment(CostMatrix(1, 1, {0.0}));
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}}));
  EXPECT_EQ(a.total_cost, 0.0);

  const auto b = solve_assignment(CostMatrix(2, 2, {1, 2, 2, 1}));
  EXPECT_EQ(b.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(b.total_cost, 2.0);
}

TEST(SolveAssignmentTest, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = RandomCost(rng, 6, 6);
    const auto a = solve_assignment(c);
    ExpectMatching(a, c);
    const auto [best, pairs] = BruteForce(c);
    ASSERT_EQ(a.total_cost, best);
    EXPECT_EQ(a.pairs, pairs);
  }
}

TEST(SolveAssignmentTest, NoSampledPermutationIsCheaper) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = RandomCost(rng, 9, 9);
    const auto a = solve_assignment(c);
    std::vector<std::size_t> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    for (int s = 0; s < 200; ++s) {
      std::shuffle(perm.begin(), perm.end(), rng);
      double sum = 0.0;
      for (std::size_t i = 0; i < 9; ++i) sum += c(i, perm[i]);
      EXPECT_LE(a.total_cost, sum + 1e-12);
    }
  }
}

TEST(SolveAssignmentTest, TiesResolveToLexicographicallySmallest) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> small(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const std::size_t m = n + trial % 3;
    CostMatrix c(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) c(i, j) = small(rng);
    }
    const auto a = solve_assignment(c);
    const auto [best, pairs] = BruteForce(c);
    ASSERT_EQ(a.total_cost, best);
    EXPECT_EQ(a.pairs, pairs);
  }
}

TEST(SolveAssignmentTest, AllEqualCostsGiveIdentity) {
  const auto a = solve_assignment(CostMatrix(4, 4, 1.0));
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
}

TEST(SolveAssignmentTest, RectangularEqualsTranspose) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const std::size_t m = n + 1 + trial % 3;
    const auto c = RandomCost(rng, n, m);
    const auto a = solve_assignment(c);
    const auto t = solve_assignment(c.Transposed());
    ExpectMatching(a, c);
    ExpectMatching(t, c.Transposed());
    Pairs swapped;
    for (const auto& [i, j] : t.pairs) swapped.emplace_back(j, i);
    std::sort(swapped.begin(), swapped.end());
    EXPECT_EQ(a.pairs, swapped);
    EXPECT_EQ(a.unmatched_cols, t.unmatched_rows);
    EXPECT_EQ(a.total_cost, BruteForce(c).first);
  }
}

TEST(SolveAssignmentTest, RowAndColumnOffsetsKeepPairs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = RandomCost(rng, 5, 5);
    auto shifted = c;
    const std::size_t r = trial % 5;
    for (std::size_t j = 0; j < 5; ++j) shifted(r, j) += 3.0;
    for (std::size_t i = 0; i < 5; ++i) shifted(i, (r + 2) % 5) += 1.5;
    EXPECT_EQ(solve_assignment(c).pairs, solve_assignment(shifted).pairs);
  }
}

TEST(SolveAssignmentTest, EmptySide) {
  const auto a = solve_assignment(CostMatrix(0, 3));
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.unmatched_cols, (std::vector<std::size_t>{0, 1, 2}));
  const auto b = solve_assignment(CostMatrix(2, 0));
  EXPECT_EQ(b.unmatched_rows, (std::vector<std::size_t>{0, 1}));
}

TEST(SolveAssignmentTest, NonFiniteRejected) {
  for (double bad : {NAN, INFINITY}) {
    try {
      solve_assignment(CostMatrix(2, 2, {0, 1, bad, 0}));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
    }
  }
}

}  // namespace
}  // namespace mtdist
