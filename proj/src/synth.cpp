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

#include "mtdist/synth.hpp"

#include <algorithm>
#include <cmath>

#include "random.hpp"

namespace mtdist {

using detail::DeriveSeed;
using detail::Rng;

MergeTree random_base_tree(std::size_t max_vertices, std::uint64_t seed) {
  if (max_vertices < 3) {
    throw Error(ErrorCode::kTooSmall, "base tree needs at least 3 vertices");
  }
  Rng rng(seed);
  RawTree raw;
  raw.vertices.push_back({0.0, std::nullopt});
  std::vector<std::uint32_t> leaves{0};
  while (raw.vertices.size() + 2 <= max_vertices) {
    const auto pick = static_cast<std::size_t>(rng.Index(leaves.size()));
    const auto parent = leaves[pick];
    leaves[pick] = leaves.back();
    leaves.pop_back();
    for (int k = 0; k < 2; ++k) {
      const auto id = static_cast<std::uint32_t>(raw.vertices.size());
      raw.vertices.push_back(
          {raw.vertices[parent].scalar - rng.UniformPositive(), parent});
      leaves.push_back(id);
    }
  }
  return MergeTree::Build(raw);
}

namespace {

std::size_t CeilFraction(double fraction, std::size_t n) {
  // Guards against 0.1 * 30 = 3.0000000000000004 style overshoot.
  const double x = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - 1e-9)));
}

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[static_cast<std::size_t>(rng.Index(i))]);
  }
}

// Mutable copy of a labeled tree for the perturbation passes.
struct Draft {
  std::vector<double> scalar;
  std::vector<std::int64_t> parent;
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<std::vector<Label>> labels;
  std::vector<bool> alive;
  std::uint32_t root = 0;

  explicit Draft(const LabeledMergeTree& lt) {
    const auto& t = lt.tree();
    const auto n = t.size();
    scalar.resize(n);
    parent.assign(n, -1);
    children.resize(n);
    labels.resize(n);
    alive.assign(n, true);
    root = t.root().index;
    for (std::uint32_t v = 0; v < n; ++v) {
      const VertexId id{v};
      scalar[v] = t.scalar(id);
      if (auto p = t.parent(id)) parent[v] = p->index;
      auto kids = t.children(id);
      children[v].assign(kids.begin(), kids.end());
      labels[v] = lt.labels().labels_of(id);
    }
  }

  void Detach(std::uint32_t child) {
    auto& siblings = children[static_cast<std::size_t>(parent[child])];
    siblings.erase(std::find(siblings.begin(), siblings.end(), child));
  }

  void Attach(std::uint32_t child, std::uint32_t new_parent) {
    parent[child] = new_parent;
    auto& siblings = children[new_parent];
    siblings.insert(std::lower_bound(siblings.begin(), siblings.end(), child), child);
  }

  // Splices out a non-root vertex left with a single child.
  void CollapseIfNeeded(std::uint32_t v) {
    if (parent[v] < 0 || children[v].size() != 1 || !labels[v].empty()) return;
    const auto only = children[v].front();
    const auto up = static_cast<std::uint32_t>(parent[v]);
    Detach(v);
    children[v].clear();
    Attach(only, up);
    alive[v] = false;
  }

  std::vector<std::uint32_t> Bfs() const {
    std::vector<std::uint32_t> order{root};
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (auto c : children[order[i]]) order.push_back(c);
    }
    return order;
  }

  // Forces every child strictly below its parent, top down.
  void Repair(double gap) {
    for (auto v : Bfs()) {
      for (auto c : children[v]) {
        if (!(scalar[c] < scalar[v])) scalar[c] = scalar[v] - gap;
      }
    }
  }

  LabeledMergeTree Build() const {
    std::vector<std::int64_t> new_id(scalar.size(), -1);
    RawTree raw;
    std::vector<std::pair<std::uint32_t, Label>> assigned;
    for (auto v : Bfs()) {
      new_id[v] = static_cast<std::int64_t>(raw.vertices.size());
      RawVertex rv{scalar[v], std::nullopt};
      if (parent[v] >= 0) rv.parent = static_cast<std::uint32_t>(new_id[parent[v]]);
      raw.vertices.push_back(rv);
      for (auto l : labels[v]) {
        assigned.emplace_back(static_cast<std::uint32_t>(new_id[v]), l);
      }
    }
    return LabeledMergeTree::Build(raw, assigned);
  }
};

}  // namespace

LabeledMergeTree assign_labels(const MergeTree& tree, double fraction,
                               std::uint64_t seed, Label unknown_base) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "label fraction must be in [0, 1]");
  }
  const auto& leaves = tree.leaves();
  const auto known = CeilFraction(fraction, leaves.size());
  if (unknown_base < static_cast<Label>(known)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown label range overlaps known labels");
  }
  std::vector<VertexId> order = leaves;
  Rng rng(seed);
  Shuffle(order, rng);
  std::vector<bool> is_known(tree.size(), false);
  std::vector<std::pair<std::uint32_t, Label>> assigned;
  for (std::size_t i = 0; i < known; ++i) {
    assigned.emplace_back(order[i].index, static_cast<Label>(i + 1));
    is_known[order[i].index] = true;
  }
  Label next = unknown_base;
  for (auto leaf : leaves) {
    if (!is_known[leaf.index]) assigned.emplace_back(leaf.index, ++next);
  }
  return LabeledMergeTree::Build(tree.ToRaw(), assigned);
}

LabeledMergeTree perturb(const LabeledMergeTree& lt, const PerturbationSpec& spec) {
  if (spec.scalar_magnitude < 0.0 || !std::isfinite(spec.scalar_magnitude)) {
    throw Error(ErrorCode::kInvalidArgument, "scalar magnitude must be finite and >= 0");
  }
  if (spec.deletion_count >= lt.leaf_count()) {
    throw Error(ErrorCode::kTooManyDeletions,
                "cannot delete " + std::to_string(spec.deletion_count) + " of " +
                    std::to_string(lt.leaf_count()) + " leaves");
  }
  Draft d(lt);
  Rng rng(spec.seed);
  const auto [lo, hi] = std::minmax_element(d.scalar.begin(), d.scalar.end());
  const double span = *hi - *lo > 0.0 ? *hi - *lo : 1.0;
  const double gap = 1e-9 * span;

  // Scalar updates on a random subset of vertices.
  std::vector<std::uint32_t> ids(d.scalar.size());
  for (std::uint32_t v = 0; v < ids.size(); ++v) ids[v] = v;
  Shuffle(ids, rng);
  const auto updates = std::min(spec.scalar_update_count, ids.size());
  for (std::size_t i = 0; i < updates; ++i) {
    d.scalar[ids[i]] += rng.Uniform(-spec.scalar_magnitude, spec.scalar_magnitude);
  }
  d.Repair(gap);

  // Rotations: lift an interior vertex's subtree to its grandparent.
  for (std::size_t r = 0; r < spec.rotation_count; ++r) {
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t v = 0; v < d.scalar.size(); ++v) {
      if (!d.alive[v] || d.children[v].empty() || d.parent[v] < 0) continue;
      const auto p = static_cast<std::size_t>(d.parent[v]);
      if (d.parent[p] < 0) continue;
      if (d.children[p].size() == 2 && !d.labels[p].empty()) continue;
      candidates.push_back(v);
    }
    if (candidates.empty()) break;
    const auto v = candidates[rng.Index(candidates.size())];
    const auto p = static_cast<std::uint32_t>(d.parent[v]);
    const auto g = static_cast<std::uint32_t>(d.parent[p]);
    d.Detach(v);
    d.Attach(v, g);
    d.CollapseIfNeeded(p);
  }
  d.Repair(gap);

  // Deletions, sparing shared-label leaves while any other leaf remains.
  for (std::size_t k = 0; k < spec.deletion_count; ++k) {
    std::vector<std::uint32_t> leaves, unprotected;
    for (std::uint32_t v = 0; v < d.scalar.size(); ++v) {
      if (!d.alive[v] || !d.children[v].empty()) continue;
      leaves.push_back(v);
      const bool shared = std::any_of(d.labels[v].begin(), d.labels[v].end(),
                                      [&](Label l) { return l <= spec.protected_labels; });
      if (!shared) unprotected.push_back(v);
    }
    const auto& pool = unprotected.empty() ? leaves : unprotected;
    const auto victim = pool[rng.Index(pool.size())];
    const auto p = static_cast<std::uint32_t>(d.parent[victim]);
    d.Detach(victim);
    d.alive[victim] = false;
    d.CollapseIfNeeded(p);
  }
  return d.Build();
}

PerturbationSpec default_perturbation(std::size_t member, std::size_t vertex_count,
                                      std::size_t leaf_count, std::uint64_t seed) {
  Rng rng(seed);
  PerturbationSpec spec;
  spec.scalar_update_count = CeilFraction(0.1, vertex_count);
  spec.scalar_magnitude = 0.05 * static_cast<double>(member);
  spec.rotation_count = (member + 4) / 5;
  const auto max_deletions =
      std::min(CeilFraction(0.1, leaf_count), leaf_count > 0 ? leaf_count - 1 : 0);
  spec.deletion_count = static_cast<std::size_t>(rng.Index(max_deletions + 1));
  spec.seed = DeriveSeed(seed, 1);
  return spec;
}

namespace {

LabeledMergeTree RenameUnknown(const LabeledMergeTree& lt, Label known_max,
                               Label base) {
  const auto& t = lt.tree();
  std::vector<std::pair<std::uint32_t, Label>> assigned;
  Label next = base;
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    for (auto l : lt.labels().labels_of(VertexId{v})) {
      assigned.emplace_back(v, l <= known_max ? l : ++next);
    }
  }
  return LabeledMergeTree::Build(t.ToRaw(), assigned);
}

}  // namespace

std::vector<LabeledMergeTree> generate_ensemble(const EnsembleSpec& spec) {
  if (spec.ensemble_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble size must be >= 1");
  }
  if (!spec.perturbation_schedule.empty() &&
      spec.perturbation_schedule.size() != spec.ensemble_size - 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "perturbation schedule needs one entry per perturbed member");
  }
  const auto base_tree = random_base_tree(spec.max_vertices, DeriveSeed(spec.seed, 0));
  const auto known = static_cast<Label>(
      CeilFraction(spec.label_fraction, base_tree.leaves().size()));
  std::vector<LabeledMergeTree> members;
  members.reserve(spec.ensemble_size);
  members.push_back(assign_labels(base_tree, spec.label_fraction,
                                  DeriveSeed(spec.seed, 1), kUnknownLabelStride));
  const auto& base = members.front();
  for (std::size_t m = 1; m < spec.ensemble_size; ++m) {
    auto p = spec.perturbation_schedule.empty()
                 ? default_perturbation(m, base.tree().size(), base.leaf_count(),
                                        DeriveSeed(spec.seed, 100 + m))
                 : spec.perturbation_schedule[m - 1];
    p.protected_labels = known;
    const auto member = perturb(base, p);
    members.push_back(RenameUnknown(member, known,
                                    static_cast<Label>(m + 1) * kUnknownLabelStride));
  }
  return members;
}

EnsembleSpec preset(const std::string& name, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.seed = seed;
  if (name == "random_50") {
    spec.max_vertices = 50;
  } else if (name == "random_100") {
    spec.max_vertices = 100;
  } else if (name == "random_200") {
    spec.max_vertices = 200;
  } else if (name == "random_500") {
    spec.max_vertices = 500;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + name + "'");
  }
  return spec;
}

}  // namespace mtdist
