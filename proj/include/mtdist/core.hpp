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

#ifndef MTDIST_CORE_HPP_
#define MTDIST_CORE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtdist {

// Labels are positive integers. Which labels are "known" is decided per pair
// of trees, never stored on a tree.
using Label = std::int64_t;

enum class ErrorCode {
  kInvalidArgument,
  kCycleDetected,
  kMultipleRoots,
  kNonDecreasingScalar,
  kDisconnectedVertex,
  kInvalidVertex,
  kUnlabeledLeaf,
  kLabelOnCollapsedVertex,
  kUnknownLabel,
  kNonLeafLabel,
  kLabelMismatch,
  kKTooLarge,
  kNonFinite,
  kEmptyTree,
  kDisagreementUnsupported,
  kNotFullAgreement,
  kTooLarge,
  kTooSmall,
  kTooManyDeletions,
  kSyntaxError,
  kDuplicateLabel,
  kIoFailure,
};

const char* ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct VertexId {
  std::uint32_t index = 0;
  auto operator<=>(const VertexId&) const = default;
};

// Unvalidated tree description, as read from a file or built by a generator.
struct RawVertex {
  double scalar = 0.0;
  std::optional<std::uint32_t> parent;
};

struct RawTree {
  std::vector<RawVertex> vertices;
};

struct ValidationReport {
  bool ok = true;
  ErrorCode code = ErrorCode::kInvalidArgument;
  std::vector<std::uint32_t> vertices;  // offending vertex ids
  std::string message;

  explicit operator bool() const { return ok; }
};

// Checks the merge-tree invariants on a raw description: a single root,
// every vertex reachable from it, no cycles, scalars strictly decreasing from
// parent to child. Reports the first violation found.
ValidationReport validate(const RawTree& raw);

// Rooted tree with a scalar per vertex, strictly decreasing from the root to
// the leaves. Immutable. Non-root vertices with exactly one child are
// collapsed at construction; the root may keep a single child.
class MergeTree {
 public:
  // Throws Error with the code of the first violated invariant.
  static MergeTree Build(const RawTree& raw);
  // Same, also returning the new id of every raw vertex (nullopt when
  // collapsed).
  static MergeTree Build(const RawTree& raw,
                         std::vector<std::optional<VertexId>>* raw_to_new);

  std::size_t size() const { return scalars_.size(); }
  VertexId root() const { return VertexId{root_}; }
  double scalar(VertexId v) const { return scalars_[check(v)]; }
  std::optional<VertexId> parent(VertexId v) const;
  std::span<const std::uint32_t> children(VertexId v) const {
    return children_[check(v)];
  }
  bool is_leaf(VertexId v) const { return children_[check(v)].empty(); }
  // Leaves in increasing id order.
  const std::vector<VertexId>& leaves() const { return leaves_; }
  // Lowest scalar over v and its descendants.
  double subtree_min(VertexId v) const { return subtree_min_[check(v)]; }
  // Vertex ids in breadth-first order from the root.
  const std::vector<std::uint32_t>& bfs_order() const { return bfs_; }

  VertexId lca(VertexId u, VertexId v) const;

  RawTree ToRaw() const;

  bool operator==(const MergeTree& other) const {
    return scalars_ == other.scalars_ && parents_ == other.parents_;
  }

 private:
  MergeTree() = default;
  std::uint32_t check(VertexId v) const;
  void Index();

  std::vector<double> scalars_;
  std::vector<std::int32_t> parents_;  // -1 for the root
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<VertexId> leaves_;
  std::vector<double> subtree_min_;
  std::vector<std::uint32_t> bfs_;
  std::uint32_t root_ = 0;

  // Euler tour with a sparse table over hop depths for O(1) LCA queries.
  std::vector<std::uint32_t> euler_;
  std::vector<std::uint32_t> hop_depth_;
  std::vector<std::uint32_t> first_visit_;
  std::vector<std::vector<std::uint32_t>> sparse_;
};

// Bidirectional map between labels and the vertices carrying them. A vertex
// may carry several labels; a label names exactly one vertex.
class LabelTable {
 public:
  LabelTable() = default;
  LabelTable(std::size_t vertex_count,
             const std::vector<std::pair<VertexId, Label>>& assignments);

  std::optional<VertexId> find(Label label) const;
  // Throws kUnknownLabel.
  VertexId at(Label label) const;
  // Sorted ascending.
  const std::vector<Label>& labels_of(VertexId v) const {
    return vertex_to_labels_.at(v.index);
  }
  const std::map<Label, VertexId>& entries() const { return label_to_vertex_; }
  std::size_t size() const { return label_to_vertex_.size(); }

  bool operator==(const LabelTable&) const = default;

 private:
  std::map<Label, VertexId> label_to_vertex_;
  std::vector<std::vector<Label>> vertex_to_labels_;
};

class LabeledMergeTree {
 public:
  // Validates the tree, collapses degree-two interior vertices and renumbers
  // vertices canonically (breadth first, siblings ordered by the smallest
  // label in their subtree), so structurally equal inputs compare equal.
  // `labels` refers to raw vertex ids.
  static LabeledMergeTree Build(
      const RawTree& raw, const std::vector<std::pair<std::uint32_t, Label>>& labels);

  const MergeTree& tree() const { return tree_; }
  const LabelTable& labels() const { return labels_; }

  // Labels carried by leaves, sorted ascending.
  const std::vector<Label>& leaf_labels() const { return leaf_labels_; }
  // Smallest label of every leaf, sorted ascending. One entry per leaf.
  const std::vector<Label>& leaf_keys() const { return leaf_keys_; }
  // The vertex a label names; throws kUnknownLabel.
  VertexId vertex(Label label) const { return labels_.at(label); }
  // As vertex() but also throws kNonLeafLabel for interior vertices.
  VertexId leaf(Label label) const;

  std::size_t leaf_count() const { return tree_.leaves().size(); }
  double scalar(Label label) const { return tree_.scalar(vertex(label)); }

  bool operator==(const LabeledMergeTree& other) const {
    return tree_ == other.tree_ && labels_ == other.labels_;
  }

 private:
  LabeledMergeTree(MergeTree tree, LabelTable labels);

  MergeTree tree_;
  LabelTable labels_;
  std::vector<Label> leaf_labels_;
  std::vector<Label> leaf_keys_;
};

// Dense real matrix whose rows and columns are addressed by labels.
class LabeledMatrix {
 public:
  LabeledMatrix() = default;
  LabeledMatrix(std::vector<Label> row_labels, std::vector<Label> col_labels);
  LabeledMatrix(std::vector<Label> row_labels, std::vector<Label> col_labels,
                std::vector<double> entries);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<Label>& row_labels() const { return row_labels_; }
  const std::vector<Label>& col_labels() const { return col_labels_; }
  const std::vector<double>& entries() const { return entries_; }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * col_labels_.size() + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * col_labels_.size() + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols(), cols()};
  }
  // Entry addressed by labels; throws kUnknownLabel.
  double at(Label row, Label col) const;

  // Same entries under new label names (sizes must match).
  LabeledMatrix Relabeled(std::vector<Label> row_labels,
                          std::vector<Label> col_labels) const;

  bool operator==(const LabeledMatrix&) const = default;

 private:
  std::vector<Label> row_labels_;
  std::vector<Label> col_labels_;
  std::vector<double> entries_;
};

enum class AgreementCase { kFull, kPartial, kDisagreement };

const char* ToString(AgreementCase c);

struct Agreement {
  AgreementCase kind = AgreementCase::kFull;
  std::vector<Label> known;  // shared leaf labels, ascending
  std::vector<Label> unknown_labels_a;
  std::vector<Label> unknown_labels_b;
  // Leaves carrying no known label, keyed by their smallest label, ascending.
  std::vector<Label> unknown_leaves_a;
  std::vector<Label> unknown_leaves_b;
};

VertexId lca(const MergeTree& tree, VertexId u, VertexId v);

// Length of the tree path between u and v with edge lengths given by scalar
// differences: 2 f(lca) - f(u) - f(v).
double path_distance(const MergeTree& tree, VertexId u, VertexId v);

// f(v) minus the lowest scalar among the descendants of v.
double depth(const MergeTree& tree, VertexId v);

// M(i, j) = f(lca(pi(i), pi(j))) over the given labels.
LabeledMatrix induced_matrix(const LabeledMergeTree& lt,
                             std::span<const Label> labels);

// Entrywise max |A - B|, entries aligned by label. Throws kLabelMismatch when
// the label sets differ.
double inf_norm_diff(const LabeledMatrix& a, const LabeledMatrix& b);

Agreement classify_agreement(const LabeledMergeTree& a,
                             const LabeledMergeTree& b);

}  // namespace mtdist

#endif  // MTDIST_CORE_HPP_
