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

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mtdist {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kMultipleRoots: return "MultipleRoots";
    case ErrorCode::kNonDecreasingScalar: return "NonDecreasingScalar";
    case ErrorCode::kDisconnectedVertex: return "DisconnectedVertex";
    case ErrorCode::kInvalidVertex: return "InvalidVertex";
    case ErrorCode::kUnlabeledLeaf: return "UnlabeledLeaf";
    case ErrorCode::kLabelOnCollapsedVertex: return "LabelOnCollapsedVertex";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kNonLeafLabel: return "NonLeafLabel";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kEmptyTree: return "EmptyTree";
    case ErrorCode::kDisagreementUnsupported: return "DisagreementUnsupported";
    case ErrorCode::kNotFullAgreement: return "NotFullAgreement";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kTooManyDeletions: return "TooManyDeletions";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

const char* ToString(AgreementCase c) {
  switch (c) {
    case AgreementCase::kFull: return "full";
    case AgreementCase::kPartial: return "partial";
    case AgreementCase::kDisagreement: return "disagreement";
  }
  return "unknown";
}

namespace {

ValidationReport Fail(ErrorCode code, std::vector<std::uint32_t> vertices,
                      const std::string& message) {
  ValidationReport report;
  report.ok = false;
  report.code = code;
  report.vertices = std::move(vertices);
  std::ostringstream os;
  os << message;
  if (!report.vertices.empty()) {
    os << " (vertex";
    for (auto v : report.vertices) os << ' ' << v;
    os << ')';
  }
  report.message = os.str();
  return report;
}

}  // namespace

ValidationReport validate(const RawTree& raw) {
  const auto n = raw.vertices.size();
  if (n == 0) return Fail(ErrorCode::kEmptyTree, {}, "tree has no vertices");

  std::vector<std::uint32_t> roots;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& rv = raw.vertices[v];
    if (!std::isfinite(rv.scalar)) {
      return Fail(ErrorCode::kNonFinite, {v}, "scalar is not finite");
    }
    if (!rv.parent) {
      roots.push_back(v);
    } else if (*rv.parent >= n) {
      return Fail(ErrorCode::kInvalidVertex, {v, *rv.parent},
                  "parent id out of range");
    } else if (*rv.parent == v) {
      return Fail(ErrorCode::kCycleDetected, {v}, "vertex is its own parent");
    }
  }
  if (roots.empty()) {
    return Fail(ErrorCode::kCycleDetected, {}, "no root: parent links form a cycle");
  }
  if (roots.size() > 1) {
    return Fail(ErrorCode::kMultipleRoots, roots, "more than one parentless vertex");
  }

  std::vector<std::vector<std::uint32_t>> children(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (raw.vertices[v].parent) children[*raw.vertices[v].parent].push_back(v);
  }
  std::vector<bool> reached(n, false);
  std::deque<std::uint32_t> queue{roots.front()};
  reached[roots.front()] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto c : children[v]) {
      if (!reached[c]) {
        reached[c] = true;
        queue.push_back(c);
      }
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (reached[v]) continue;
    // With a single root, an unreachable vertex hangs off a cycle.
    std::vector<std::uint32_t> chain;
    std::vector<bool> on_chain(n, false);
    std::uint32_t cur = v;
    while (!on_chain[cur]) {
      on_chain[cur] = true;
      chain.push_back(cur);
      cur = *raw.vertices[cur].parent;
    }
    std::vector<std::uint32_t> cycle(std::find(chain.begin(), chain.end(), cur),
                                     chain.end());
    std::sort(cycle.begin(), cycle.end());
    return Fail(ErrorCode::kCycleDetected, cycle, "parent links form a cycle");
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& rv = raw.vertices[v];
    if (rv.parent && !(rv.scalar < raw.vertices[*rv.parent].scalar)) {
      return Fail(ErrorCode::kNonDecreasingScalar, {v, *rv.parent},
                  "child scalar is not below its parent");
    }
  }
  return {};
}

MergeTree MergeTree::Build(const RawTree& raw) { return Build(raw, nullptr); }

MergeTree MergeTree::Build(const RawTree& raw,
                           std::vector<std::optional<VertexId>>* raw_to_new) {
  const auto report = validate(raw);
  if (!report) throw Error(report.code, report.message);

  const auto n = raw.vertices.size();
  std::vector<std::uint32_t> child_count(n, 0);
  for (const auto& rv : raw.vertices) {
    if (rv.parent) ++child_count[*rv.parent];
  }
  auto kept = [&](std::uint32_t v) {
    return !raw.vertices[v].parent || child_count[v] != 1;
  };
  std::vector<std::optional<VertexId>> mapping(n);
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (kept(v)) mapping[v] = VertexId{next++};
  }

  MergeTree tree;
  tree.scalars_.resize(next);
  tree.parents_.assign(next, -1);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!mapping[v]) continue;
    const auto id = mapping[v]->index;
    tree.scalars_[id] = raw.vertices[v].scalar;
    auto p = raw.vertices[v].parent;
    while (p && !kept(*p)) p = raw.vertices[*p].parent;
    if (p) tree.parents_[id] = static_cast<std::int32_t>(mapping[*p]->index);
  }
  tree.Index();
  if (raw_to_new) *raw_to_new = std::move(mapping);
  return tree;
}

std::uint32_t MergeTree::check(VertexId v) const {
  if (v.index >= scalars_.size()) {
    throw Error(ErrorCode::kInvalidVertex,
                "vertex " + std::to_string(v.index) + " out of range");
  }
  return v.index;
}

std::optional<VertexId> MergeTree::parent(VertexId v) const {
  const auto p = parents_[check(v)];
  if (p < 0) return std::nullopt;
  return VertexId{static_cast<std::uint32_t>(p)};
}

void MergeTree::Index() {
  const auto n = static_cast<std::uint32_t>(scalars_.size());
  children_.assign(n, {});
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parents_[v] < 0) {
      root_ = v;
    } else {
      children_[parents_[v]].push_back(v);
    }
  }
  leaves_.clear();
  for (std::uint32_t v = 0; v < n; ++v) {
    if (children_[v].empty()) leaves_.push_back(VertexId{v});
  }

  bfs_.clear();
  bfs_.reserve(n);
  bfs_.push_back(root_);
  for (std::size_t i = 0; i < bfs_.size(); ++i) {
    for (auto c : children_[bfs_[i]]) bfs_.push_back(c);
  }
  subtree_min_ = scalars_;
  for (auto it = bfs_.rbegin(); it != bfs_.rend(); ++it) {
    if (parents_[*it] >= 0) {
      auto& m = subtree_min_[parents_[*it]];
      m = std::min(m, subtree_min_[*it]);
    }
  }

  hop_depth_.assign(n, 0);
  for (auto v : bfs_) {
    if (parents_[v] >= 0) hop_depth_[v] = hop_depth_[parents_[v]] + 1;
  }
  euler_.clear();
  euler_.reserve(2 * n);
  first_visit_.assign(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root_, 0}};
  first_visit_[root_] = 0;
  euler_.push_back(root_);
  while (!stack.empty()) {
    auto& [v, next_child] = stack.back();
    if (next_child < children_[v].size()) {
      const auto c = children_[v][next_child++];
      first_visit_[c] = static_cast<std::uint32_t>(euler_.size());
      euler_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }

  const auto m = euler_.size();
  const auto levels = static_cast<std::size_t>(std::bit_width(m));
  sparse_.assign(levels, {});
  sparse_[0] = euler_;
  for (std::size_t k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    sparse_[k].resize(m - span + 1);
    for (std::size_t i = 0; i + span <= m; ++i) {
      const auto a = sparse_[k - 1][i];
      const auto b = sparse_[k - 1][i + span / 2];
      sparse_[k][i] = hop_depth_[a] <= hop_depth_[b] ? a : b;
    }
  }
}

VertexId MergeTree::lca(VertexId u, VertexId v) const {
  auto l = first_visit_[check(u)];
  auto r = first_visit_[check(v)];
  if (l > r) std::swap(l, r);
  const auto len = r - l + 1;
  const auto k = static_cast<std::size_t>(std::bit_width(len) - 1);
  const auto a = sparse_[k][l];
  const auto b = sparse_[k][r + 1 - (std::size_t{1} << k)];
  return VertexId{hop_depth_[a] <= hop_depth_[b] ? a : b};
}

RawTree MergeTree::ToRaw() const {
  RawTree raw;
  raw.vertices.resize(scalars_.size());
  for (std::size_t v = 0; v < scalars_.size(); ++v) {
    raw.vertices[v].scalar = scalars_[v];
    if (parents_[v] >= 0) {
      raw.vertices[v].parent = static_cast<std::uint32_t>(parents_[v]);
    }
  }
  return raw;
}

LabelTable::LabelTable(std::size_t vertex_count,
                       const std::vector<std::pair<VertexId, Label>>& assignments)
    : vertex_to_labels_(vertex_count) {
  for (const auto& [v, label] : assignments) {
    if (v.index >= vertex_count) {
      throw Error(ErrorCode::kInvalidVertex,
                  "label " + std::to_string(label) + " on missing vertex");
    }
    if (label <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(label) + " is not positive");
    }
    if (!label_to_vertex_.emplace(label, v).second) {
      throw Error(ErrorCode::kDuplicateLabel,
                  "label " + std::to_string(label) + " assigned twice");
    }
    vertex_to_labels_[v.index].push_back(label);
  }
  for (auto& ls : vertex_to_labels_) std::sort(ls.begin(), ls.end());
}

std::optional<VertexId> LabelTable::find(Label label) const {
  auto it = label_to_vertex_.find(label);
  if (it == label_to_vertex_.end()) return std::nullopt;
  return it->second;
}

VertexId LabelTable::at(Label label) const {
  auto v = find(label);
  if (!v) {
    throw Error(ErrorCode::kUnknownLabel,
                "label " + std::to_string(label) + " not present");
  }
  return *v;
}

LabeledMergeTree::LabeledMergeTree(MergeTree tree, LabelTable labels)
    : tree_(std::move(tree)), labels_(std::move(labels)) {
  for (auto leaf : tree_.leaves()) {
    const auto& ls = labels_.labels_of(leaf);
    if (ls.empty()) {
      throw Error(ErrorCode::kUnlabeledLeaf,
                  "leaf " + std::to_string(leaf.index) + " carries no label");
    }
    leaf_labels_.insert(leaf_labels_.end(), ls.begin(), ls.end());
    leaf_keys_.push_back(ls.front());
  }
  std::sort(leaf_labels_.begin(), leaf_labels_.end());
  std::sort(leaf_keys_.begin(), leaf_keys_.end());
}

LabeledMergeTree LabeledMergeTree::Build(
    const RawTree& raw, const std::vector<std::pair<std::uint32_t, Label>>& labels) {
  std::vector<std::optional<VertexId>> raw_to_new;
  const auto collapsed = MergeTree::Build(raw, &raw_to_new);
  const auto n = collapsed.size();

  std::vector<std::pair<VertexId, Label>> assigned;
  assigned.reserve(labels.size());
  for (const auto& [raw_id, label] : labels) {
    if (raw_id >= raw_to_new.size()) {
      throw Error(ErrorCode::kInvalidVertex,
                  "label " + std::to_string(label) + " on missing vertex");
    }
    if (!raw_to_new[raw_id]) {
      throw Error(ErrorCode::kLabelOnCollapsedVertex,
                  "label " + std::to_string(label) +
                      " sits on a vertex with a single child");
    }
    assigned.emplace_back(*raw_to_new[raw_id], label);
  }
  // Validates labels against the collapsed ids before renumbering.
  const LabelTable staged(n, assigned);

  constexpr Label kNoLabel = std::numeric_limits<Label>::max();
  std::vector<Label> min_label(n, kNoLabel);
  const auto& order = collapsed.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v{*it};
    const auto& own = staged.labels_of(v);
    if (!own.empty()) min_label[*it] = std::min(min_label[*it], own.front());
    if (collapsed.is_leaf(v) && own.empty()) {
      throw Error(ErrorCode::kUnlabeledLeaf,
                  "leaf " + std::to_string(*it) + " carries no label");
    }
    if (auto p = collapsed.parent(v)) {
      min_label[p->index] = std::min(min_label[p->index], min_label[*it]);
    }
  }

  std::vector<std::uint32_t> canonical{collapsed.root().index};
  canonical.reserve(n);
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    auto kids = collapsed.children(VertexId{canonical[i]});
    std::vector<std::uint32_t> sorted(kids.begin(), kids.end());
    std::sort(sorted.begin(), sorted.end(), [&](auto x, auto y) {
      return min_label[x] < min_label[y];
    });
    canonical.insert(canonical.end(), sorted.begin(), sorted.end());
  }
  std::vector<std::uint32_t> new_id(n);
  for (std::uint32_t i = 0; i < n; ++i) new_id[canonical[i]] = i;

  RawTree ordered;
  ordered.vertices.resize(n);
  for (std::uint32_t old = 0; old < n; ++old) {
    auto& rv = ordered.vertices[new_id[old]];
    rv.scalar = collapsed.scalar(VertexId{old});
    if (auto p = collapsed.parent(VertexId{old})) rv.parent = new_id[p->index];
  }
  for (auto& [v, label] : assigned) v = VertexId{new_id[v.index]};
  auto tree = MergeTree::Build(ordered);
  LabelTable table(n, assigned);
  return LabeledMergeTree(std::move(tree), std::move(table));
}

VertexId LabeledMergeTree::leaf(Label label) const {
  const auto v = vertex(label);
  if (!tree_.is_leaf(v)) {
    throw Error(ErrorCode::kNonLeafLabel,
                "label " + std::to_string(label) + " is not on a leaf");
  }
  return v;
}

LabeledMatrix::LabeledMatrix(std::vector<Label> row_labels,
                             std::vector<Label> col_labels)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      entries_(row_labels_.size() * col_labels_.size(), 0.0) {}

LabeledMatrix::LabeledMatrix(std::vector<Label> row_labels,
                             std::vector<Label> col_labels,
                             std::vector<double> entries)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      entries_(std::move(entries)) {
  if (entries_.size() != row_labels_.size() * col_labels_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix entry count mismatch");
  }
}

double LabeledMatrix::at(Label row, Label col) const {
  auto r = std::find(row_labels_.begin(), row_labels_.end(), row);
  auto c = std::find(col_labels_.begin(), col_labels_.end(), col);
  if (r == row_labels_.end() || c == col_labels_.end()) {
    throw Error(ErrorCode::kUnknownLabel, "matrix has no such row/column label");
  }
  return (*this)(static_cast<std::size_t>(r - row_labels_.begin()),
                 static_cast<std::size_t>(c - col_labels_.begin()));
}

LabeledMatrix LabeledMatrix::Relabeled(std::vector<Label> row_labels,
                                       std::vector<Label> col_labels) const {
  if (row_labels.size() != rows() || col_labels.size() != cols()) {
    throw Error(ErrorCode::kInvalidArgument, "relabel size mismatch");
  }
  return LabeledMatrix(std::move(row_labels), std::move(col_labels), entries_);
}

VertexId lca(const MergeTree& tree, VertexId u, VertexId v) {
  return tree.lca(u, v);
}

double path_distance(const MergeTree& tree, VertexId u, VertexId v) {
  const double top = tree.scalar(tree.lca(u, v));
  return (top - tree.scalar(u)) + (top - tree.scalar(v));
}

double depth(const MergeTree& tree, VertexId v) {
  return tree.scalar(v) - tree.subtree_min(v);
}

LabeledMatrix induced_matrix(const LabeledMergeTree& lt,
                             std::span<const Label> labels) {
  std::vector<Label> order(labels.begin(), labels.end());
  if (std::set<Label>(order.begin(), order.end()).size() != order.size()) {
    throw Error(ErrorCode::kInvalidArgument, "induced matrix labels repeat");
  }
  std::vector<VertexId> vs;
  vs.reserve(order.size());
  for (auto l : order) vs.push_back(lt.vertex(l));
  const auto& tree = lt.tree();
  LabeledMatrix m(order, order);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    m(i, i) = tree.scalar(vs[i]);
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const double s = tree.scalar(tree.lca(vs[i], vs[j]));
      m(i, j) = s;
      m(j, i) = s;
    }
  }
  return m;
}

namespace {

std::vector<std::size_t> Alignment(const std::vector<Label>& from,
                                   const std::vector<Label>& to) {
  std::vector<std::size_t> index(from.size());
  if (from == to) {
    for (std::size_t i = 0; i < from.size(); ++i) index[i] = i;
    return index;
  }
  if (from.size() != to.size()) {
    throw Error(ErrorCode::kLabelMismatch, "matrices have different label sets");
  }
  std::unordered_map<Label, std::size_t> position;
  for (std::size_t i = 0; i < to.size(); ++i) position.emplace(to[i], i);
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto it = position.find(from[i]);
    if (it == position.end()) {
      throw Error(ErrorCode::kLabelMismatch,
                  "label " + std::to_string(from[i]) + " missing from one matrix");
    }
    index[i] = it->second;
  }
  return index;
}

}  // namespace

double inf_norm_diff(const LabeledMatrix& a, const LabeledMatrix& b) {
  const auto rows = Alignment(a.row_labels(), b.row_labels());
  const auto cols = Alignment(a.col_labels(), b.col_labels());
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(rows[i], cols[j])));
    }
  }
  return worst;
}

namespace {

std::vector<Label> UnknownLeaves(const LabeledMergeTree& lt,
                                 const std::vector<Label>& known) {
  std::vector<Label> keys;
  for (auto leaf : lt.tree().leaves()) {
    const auto& ls = lt.labels().labels_of(leaf);
    const bool any_known = std::any_of(ls.begin(), ls.end(), [&](Label l) {
      return std::binary_search(known.begin(), known.end(), l);
    });
    if (!any_known) keys.push_back(ls.front());
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

Agreement classify_agreement(const LabeledMergeTree& a,
                             const LabeledMergeTree& b) {
  Agreement out;
  const auto& la = a.leaf_labels();
  const auto& lb = b.leaf_labels();
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                        std::back_inserter(out.known));
  std::set_difference(la.begin(), la.end(), out.known.begin(), out.known.end(),
                      std::back_inserter(out.unknown_labels_a));
  std::set_difference(lb.begin(), lb.end(), out.known.begin(), out.known.end(),
                      std::back_inserter(out.unknown_labels_b));
  out.unknown_leaves_a = UnknownLeaves(a, out.known);
  out.unknown_leaves_b = UnknownLeaves(b, out.known);
  if (la == lb) {
    out.kind = AgreementCase::kFull;
  } else if (!out.known.empty()) {
    out.kind = AgreementCase::kPartial;
  } else {
    out.kind = AgreementCase::kDisagreement;
  }
  return out;
}

}  // namespace mtdist
