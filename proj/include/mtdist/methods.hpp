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

// Heuristic distances between partially labeled merge trees.
//
// All three heuristics follow the same outline: classify the pair by label
// agreement, pick the tree with more unknown-labeled leaves as pivot, pair
// unknown leaves across trees with a minimum-weight maximum matching, and
// compare the induced matrices of the two trees over the resulting common
// label set. They differ in how surplus pivot leaves are handled:
//
//   elm     trims the shallowest surplus leaves before matching and charges
//           half of each trimmed leaf's merge height (delta) to the result.
//   mmb     matches first and charges delta for the leaves left unmatched.
//   greedy  glues every unmatched leaf onto the most similar vertex of the
//           other tree and reports the induced-matrix difference alone.
//
// Results never depend on argument order: the pivot is chosen canonically.

#ifndef MTDIST_METHODS_HPP_
#define MTDIST_METHODS_HPP_

#include <chrono>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtdist/core.hpp"

namespace mtdist {

enum class Method { kElm, kMmb, kGreedy, kFull, kOracle };

const char* ToString(Method m);
// Accepts "elm", "mmb", "greedy", "full", "oracle"; throws kInvalidArgument.
Method ParseMethod(const std::string& name);

// Row i holds S(i, j) = f(lca(v_i, v_j)) - f(v_i) over the column leaves;
// row_sums[i] is the appended summation column.
struct SMatrix {
  LabeledMatrix values;
  std::vector<double> row_sums;
};

enum class Side { kA, kB };

struct Matching {
  std::vector<std::pair<Label, Label>> pairs;  // (label in a, label in b)
  std::vector<Label> unmatched_a;
  std::vector<Label> unmatched_b;
};

struct MethodResult {
  Method method = Method::kElm;
  AgreementCase agreement = AgreementCase::kFull;
  Side pivot = Side::kA;
  double distance = 0.0;
  double epsilon = 0.0;
  std::map<Label, double> deltas;  // keyed by leaf label in the pivot tree
  Matching matching;
  // Labels of b renamed to their partners in a before comparing matrices.
  std::map<Label, Label> relabeling;
  std::vector<Label> trimmed;  // pivot leaves removed before matching (elm)
  // Greedy fallback only: pivot leaf label -> label of the vertex of the
  // other tree that additionally received it.
  std::map<Label, Label> greedy_assignments;
  LabeledMatrix induced_a;
  LabeledMatrix induced_b;  // relabeled into a's label names
  std::chrono::nanoseconds wall_time{0};
};

SMatrix build_s_matrix(const LabeledMergeTree& lt, std::span<const Label> rows,
                       std::span<const Label> cols);

// The k row labels with the smallest row sums, ties broken by ascending
// label. Throws kKTooLarge when k exceeds the row count.
std::vector<Label> select_trim(const SMatrix& s, std::size_t k);

// Path distances from each unknown leaf (rows) to each known leaf (columns).
LabeledMatrix unknown_to_known_distances(const LabeledMergeTree& lt,
                                         std::span<const Label> unknown,
                                         std::span<const Label> known);

// Symmetric matrix of path distances among the given leaves.
LabeledMatrix pairwise_leaf_distances(const LabeledMergeTree& lt,
                                      std::span<const Label> labels);

MethodResult elm_distance(const LabeledMergeTree& a, const LabeledMergeTree& b);
MethodResult mmb_distance(const LabeledMergeTree& a, const LabeledMergeTree& b);
// Throws kDisagreementUnsupported for pairs without a shared label.
MethodResult greedy_distance(const LabeledMergeTree& a, const LabeledMergeTree& b);
// Throws kNotFullAgreement unless both trees carry the same leaf labels.
MethodResult full_agreement_distance(const LabeledMergeTree& a,
                                     const LabeledMergeTree& b);

// Evaluates max(delta/2, epsilon) for an explicit choice of dropped leaves
// (trimmed or unmatched) and cross-tree pairs of unknown leaves. Dropped
// leaves may come from either tree; delta for a dropped leaf is its smallest
// merge height over the leaves of its tree that are not dropped.
double evaluate_objective(const LabeledMergeTree& a, const LabeledMergeTree& b,
                          std::span<const Label> dropped_a,
                          std::span<const Label> dropped_b,
                          std::span<const std::pair<Label, Label>> pairs);

// Same objective, re-evaluated from what a result reports.
double reevaluate(const LabeledMergeTree& a, const LabeledMergeTree& b,
                  const MethodResult& result);

// Exhaustive minimum of the objective over every drop set of the required
// size and every bijection between the surviving unknown leaves. Limited to
// 8 unknown leaves in total (kTooLarge beyond).
double oracle_min_objective(const LabeledMergeTree& a, const LabeledMergeTree& b);

inline constexpr std::size_t kOracleMaxUnknownLeaves = 8;

// Dispatches on `method`. For elm and mmb a full-agreement pair is handled by
// full_agreement_distance. The oracle result carries only the distance.
MethodResult compute_distance(Method method, const LabeledMergeTree& a,
                              const LabeledMergeTree& b);

}  // namespace mtdist

#endif  // MTDIST_METHODS_HPP_
