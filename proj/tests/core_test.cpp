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

#include "mtdist/core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "test_util.hpp"

namespace mtdist {
namespace {

using testing::Fixture;
using testing::RandomRawTree;

RawTree Chain() {
  RawTree raw;
  raw.vertices = {{2.0, std::nullopt}, {1.0, 0u}, {0.0, 1u}};
  return raw;
}

TEST(ValidateTest, AcceptsChain) { EXPECT_TRUE(validate(Chain()).ok); }

TEST(ValidateTest, TwoRoots) {
  RawTree raw;
  raw.vertices = {{1.0, std::nullopt}, {0.0, std::nullopt}};
  const auto r = validate(raw);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.code, ErrorCode::kMultipleRoots);
}

TEST(ValidateTest, IncreasingScalar) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {5.0, 0u}};
  const auto r = validate(raw);
  EXPECT_EQ(r.code, ErrorCode::kNonDecreasingScalar);
  EXPECT_EQ(r.vertices, (std::vector<std::uint32_t>{1, 0}));  // child, parent
}

TEST(ValidateTest, EqualScalarRejected) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {3.0, 0u}};
  EXPECT_EQ(validate(raw).code, ErrorCode::kNonDecreasingScalar);
}

TEST(ValidateTest, Cycle) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {2.0, 2u}, {1.0, 1u}};
  const auto r = validate(raw);
  EXPECT_EQ(r.code, ErrorCode::kCycleDetected);
}

TEST(ValidateTest, EmptyAndNonFinite) {
  EXPECT_EQ(validate(RawTree{}).code, ErrorCode::kEmptyTree);
  RawTree raw;
  raw.vertices = {{NAN, std::nullopt}};
  EXPECT_EQ(validate(raw).code, ErrorCode::kNonFinite);
}

TEST(ValidateTest, ParentOutOfRange) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {2.0, 7u}};
  EXPECT_EQ(validate(raw).code, ErrorCode::kInvalidVertex);
}

TEST(MergeTreeTest, BuildThrowsFirstViolation) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {5.0, 0u}};
  try {
    MergeTree::Build(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonDecreasingScalar);
  }
}

TEST(MergeTreeTest, CollapsesInteriorDegreeTwo) {
  std::vector<std::optional<VertexId>> map;
  const auto t = MergeTree::Build(Chain(), &map);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_FALSE(map[1].has_value());
  ASSERT_TRUE(map[2].has_value());
  EXPECT_EQ(t.parent(*map[2]), t.root());
  EXPECT_DOUBLE_EQ(t.scalar(*map[2]), 0.0);
}

TEST(MergeTreeTest, NoInteriorVertexHasOneChild) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = MergeTree::Build(RandomRawTree(rng, 40));
    for (std::uint32_t v = 0; v < t.size(); ++v) {
      if (VertexId{v} == t.root()) continue;
      EXPECT_NE(t.children(VertexId{v}).size(), 1u);
    }
  }
}

TEST(LabeledMergeTreeTest, CanonicalFormIgnoresInputOrder) {
  RawTree x;
  x.vertices = {{3, std::nullopt}, {0, 0u}, {1, 0u}};
  RawTree y;
  y.vertices = {{1, 2u}, {0, 2u}, {3, std::nullopt}};
  const auto a = LabeledMergeTree::Build(x, {{1, 7}, {2, 8}});
  const auto b = LabeledMergeTree::Build(y, {{1, 7}, {0, 8}});
  EXPECT_EQ(a, b);
}

TEST(LabeledMergeTreeTest, UnlabeledLeafRejected) {
  RawTree x;
  x.vertices = {{3, std::nullopt}, {0, 0u}, {1, 0u}};
  try {
    LabeledMergeTree::Build(x, {{1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnlabeledLeaf);
  }
}

TEST(LabeledMergeTreeTest, LabelLookups) {
  const auto t = Fixture("ex1_T1.mtree");
  EXPECT_EQ(t.leaf_labels(), (std::vector<Label>{1, 2, 3, 4}));
  EXPECT_EQ(t.leaf_keys(), (std::vector<Label>{1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(t.scalar(3), 1.0);
  EXPECT_THROW(t.vertex(99), Error);
}

// Brute-force LCA: intersect the ancestor chains.
VertexId ChainLca(const MergeTree& t, VertexId u, VertexId v) {
  std::set<std::uint32_t> up;
  for (std::optional<VertexId> x = u; x; x = t.parent(*x)) up.insert(x->index);
  for (std::optional<VertexId> x = v; x; x = t.parent(*x)) {
    if (up.count(x->index)) return *x;
  }
  return t.root();
}

TEST(LcaTest, TrivialCases) {
  const auto t = Fixture("ex1_T1.mtree").tree();
  for (auto l : t.leaves()) {
    EXPECT_EQ(lca(t, l, l), l);
    EXPECT_EQ(lca(t, l, t.root()), t.root());
  }
}

TEST(LcaTest, MatchesAncestorChains) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = MergeTree::Build(RandomRawTree(rng, 50));
    for (std::uint32_t u = 0; u < t.size(); ++u) {
      for (std::uint32_t v = 0; v < t.size(); ++v) {
        ASSERT_EQ(lca(t, VertexId{u}, VertexId{v}), ChainLca(t, VertexId{u}, VertexId{v}));
      }
    }
  }
}

TEST(LcaTest, InvalidVertex) {
  const auto t = Fixture("ex1_T1.mtree").tree();
  try {
    lca(t, VertexId{0}, VertexId{100});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidVertex);
  }
}

// Path length by breadth-first search over |f(child) - f(parent)| edges.
double BfsDistance(const MergeTree& t, VertexId from, VertexId to) {
  std::map<std::uint32_t, double> dist{{from.index, 0.0}};
  std::queue<std::uint32_t> q;
  q.push(from.index);
  while (!q.empty()) {
    const auto x = q.front();
    q.pop();
    std::vector<std::uint32_t> nbrs(t.children(VertexId{x}).begin(),
                                    t.children(VertexId{x}).end());
    if (auto p = t.parent(VertexId{x})) nbrs.push_back(p->index);
    for (auto y : nbrs) {
      if (dist.count(y)) continue;
      dist[y] = dist[x] + std::abs(t.scalar(VertexId{x}) - t.scalar(VertexId{y}));
      q.push(y);
    }
  }
  return dist.at(to.index);
}

TEST(PathDistanceTest, Trivial) {
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {0.0, 0u}, {1.0, 0u}};
  const auto t = MergeTree::Build(raw);
  EXPECT_DOUBLE_EQ(path_distance(t, VertexId{1}, VertexId{1}), 0.0);
  const auto leaf0 = t.scalar(VertexId{1}) == 0.0 ? VertexId{1} : VertexId{2};
  EXPECT_DOUBLE_EQ(path_distance(t, leaf0, t.root()), 3.0);
}

TEST(PathDistanceTest, MatchesEdgeSumAndIsAMetric) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = MergeTree::Build(RandomRawTree(rng, 30, /*integral=*/true));
    const auto& L = t.leaves();
    for (auto u : L) {
      for (auto v : L) {
        const double d = path_distance(t, u, v);
        EXPECT_EQ(d, BfsDistance(t, u, v));
        EXPECT_EQ(d, path_distance(t, v, u));
        EXPECT_GE(d, 0.0);
        EXPECT_EQ(d == 0.0, u == v);
        for (auto w : L) {
          EXPECT_LE(d, path_distance(t, u, w) + path_distance(t, w, v));
        }
      }
    }
  }
}

TEST(PathDistanceTest, UnknownLeafDistanceVectors) {
  const auto t1 = Fixture("ex1_T1.mtree");
  const auto t2 = Fixture("ex1_T2.mtree");
  auto d = [](const LabeledMergeTree& t, Label x, Label y) {
    return path_distance(t.tree(), t.vertex(x), t.vertex(y));
  };
  // Leaf 3 of the first tree lies 5 from both known leaves, leaf 4 lies 6.
  EXPECT_EQ(d(t1, 3, 1), 5.0);
  EXPECT_EQ(d(t1, 3, 2), 5.0);
  EXPECT_EQ(d(t1, 4, 1), 6.0);
  EXPECT_EQ(d(t1, 4, 2), 6.0);
  EXPECT_EQ(d(t2, 5, 1), 6.0);
  EXPECT_EQ(d(t2, 5, 2), 6.0);
  EXPECT_EQ(d(Fixture("ex2_T2.mtree"), 1, 2), 12.0);
}

TEST(DepthTest, Basics) {
  const auto chain = MergeTree::Build(Chain());
  EXPECT_DOUBLE_EQ(depth(chain, chain.root()), 2.0);
  for (auto l : chain.leaves()) EXPECT_DOUBLE_EQ(depth(chain, l), 0.0);
  RawTree raw;
  raw.vertices = {{3.0, std::nullopt}, {1.0, 0u}, {0.0, 1u}, {0.5, 1u}};
  const auto t = MergeTree::Build(raw);
  EXPECT_DOUBLE_EQ(depth(t, t.root()), 3.0);
}

TEST(DepthTest, MatchesDescendantMinimum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = MergeTree::Build(RandomRawTree(rng, 40));
    for (std::uint32_t v = 0; v < t.size(); ++v) {
      double lo = t.scalar(VertexId{v});
      for (std::uint32_t d = 0; d < t.size(); ++d) {
        if (ChainLca(t, VertexId{v}, VertexId{d}) == VertexId{v}) {
          lo = std::min(lo, t.scalar(VertexId{d}));
        }
      }
      EXPECT_EQ(depth(t, VertexId{v}), t.scalar(VertexId{v}) - lo);
    }
  }
}

LabeledMatrix Square(std::vector<Label> labels, std::vector<double> e) {
  return LabeledMatrix(labels, labels, std::move(e));
}

TEST(InducedMatrixTest, ExampleThree) {
  const std::vector<Label> labels{1, 2, 4};
  const auto m1 = induced_matrix(Fixture("ex3_T1.mtree"), labels);
  EXPECT_EQ(m1, Square(labels, {0, 1, 3, 1, 0, 3, 3, 3, 1}));
  // The second tree's leaf 5 plays the role of label 2.
  const auto t2 = Fixture("ex3_T2.mtree");
  const std::vector<Label> labels2{1, 5, 4};
  const auto m2 = induced_matrix(t2, labels2).Relabeled(labels, labels);
  EXPECT_EQ(m2, Square(labels, {0, 3, 3, 3, 2, 3, 3, 3, 1}));
  EXPECT_EQ(inf_norm_diff(m1, m2), 2.0);
}

TEST(InducedMatrixTest, SingleLabel) {
  const auto t = Fixture("ex3_T1.mtree");
  const std::vector<Label> one{3};
  EXPECT_EQ(induced_matrix(t, one), Square({3}, {2.0}));
  const std::vector<Label> missing{42};
  EXPECT_THROW(induced_matrix(t, missing), Error);
}

TEST(InducedMatrixTest, SymmetricAndDominatesDiagonal) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lt = testing::RandomLabeled(rng, 6, 3, 100);
    const auto& labels = lt.leaf_labels();
    const auto m = induced_matrix(lt, labels);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        EXPECT_EQ(m(i, j), m(j, i));
        EXPECT_GE(m(i, j), std::max(m(i, i), m(j, j)));
      }
    }
  }
}

TEST(InducedMatrixTest, ShiftMovesEveryEntry) {
  std::mt19937_64 rng(22);
  const auto a = testing::RandomLabeled(rng, 5, 0, 100, /*integral=*/true);
  const auto b = testing::RandomLabeled(rng, 5, 0, 100, /*integral=*/true);
  const auto& labels = a.leaf_labels();
  const double c = 2.5;
  const auto ma = induced_matrix(a, labels);
  const auto sa = induced_matrix(testing::Transformed(a, 1.0, c), labels);
  for (std::size_t k = 0; k < ma.entries().size(); ++k) {
    EXPECT_EQ(sa.entries()[k], ma.entries()[k] + c);
  }
  const auto mb = induced_matrix(b, labels);
  const auto sb = induced_matrix(testing::Transformed(b, 1.0, c), labels);
  EXPECT_EQ(inf_norm_diff(ma, mb), inf_norm_diff(sa, sb));
}

TEST(InfNormDiffTest, Basics) {
  const auto a = Square({1, 2}, {0, 1, 1, 0});
  const auto b = Square({1, 2}, {0, 4, 4, 0});
  EXPECT_EQ(inf_norm_diff(a, a), 0.0);
  EXPECT_EQ(inf_norm_diff(a, b), 3.0);
}

TEST(InfNormDiffTest, AlignsByLabel) {
  const auto a = Square({1, 2}, {0, 1, 1, 5});
  const auto b = Square({2, 1}, {5, 1, 1, 0});
  EXPECT_EQ(inf_norm_diff(a, b), 0.0);
  const auto c = Square({1, 3}, {0, 1, 1, 5});
  try {
    inf_norm_diff(a, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelMismatch);
  }
}

TEST(ClassifyAgreementTest, Cases) {
  const auto full = Fixture("full.mtree");
  EXPECT_EQ(classify_agreement(full, full).kind, AgreementCase::kFull);

  const auto p = classify_agreement(Fixture("ex1_T1.mtree"), Fixture("ex1_T2.mtree"));
  EXPECT_EQ(p.kind, AgreementCase::kPartial);
  EXPECT_EQ(p.known, (std::vector<Label>{1, 2}));
  EXPECT_EQ(p.unknown_labels_a, (std::vector<Label>{3, 4}));
  EXPECT_EQ(p.unknown_labels_b, (std::vector<Label>{5}));

  const auto d = classify_agreement(full, Fixture("disjoint.mtree"));
  EXPECT_EQ(d.kind, AgreementCase::kDisagreement);
  EXPECT_TRUE(d.known.empty());
}

}  // namespace
}  // namespace mtdist
