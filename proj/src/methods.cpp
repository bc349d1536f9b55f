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

#include "mtdist/methods.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "mtdist/assignment.hpp"

namespace mtdist {

const char* ToString(Method m) {
  switch (m) {
    case Method::kElm: return "elm";
    case Method::kMmb: return "mmb";
    case Method::kGreedy: return "greedy";
    case Method::kFull: return "full";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  for (auto m : {Method::kElm, Method::kMmb, Method::kGreedy, Method::kFull,
                 Method::kOracle}) {
    if (name == ToString(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
}

SMatrix build_s_matrix(const LabeledMergeTree& lt, std::span<const Label> rows,
                       std::span<const Label> cols) {
  std::vector<VertexId> row_v, col_v;
  for (auto l : rows) row_v.push_back(lt.leaf(l));
  for (auto l : cols) col_v.push_back(lt.leaf(l));
  const auto& tree = lt.tree();
  SMatrix s{LabeledMatrix({rows.begin(), rows.end()}, {cols.begin(), cols.end()}),
            std::vector<double>(rows.size(), 0.0)};
  for (std::size_t i = 0; i < row_v.size(); ++i) {
    const double base = tree.scalar(row_v[i]);
    double sum = 0.0;
    for (std::size_t j = 0; j < col_v.size(); ++j) {
      const double v = tree.scalar(tree.lca(row_v[i], col_v[j])) - base;
      s.values(i, j) = v;
      sum += v;
    }
    s.row_sums[i] = sum;
  }
  return s;
}

std::vector<Label> select_trim(const SMatrix& s, std::size_t k) {
  const auto& labels = s.values.row_labels();
  if (k > labels.size()) {
    throw Error(ErrorCode::kKTooLarge, "cannot trim " + std::to_string(k) +
                                           " of " + std::to_string(labels.size()) +
                                           " rows");
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (s.row_sums[x] != s.row_sums[y]) return s.row_sums[x] < s.row_sums[y];
    return labels[x] < labels[y];
  });
  std::vector<Label> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(labels[order[i]]);
  return out;
}

LabeledMatrix unknown_to_known_distances(const LabeledMergeTree& lt,
                                         std::span<const Label> unknown,
                                         std::span<const Label> known) {
  std::vector<VertexId> row_v, col_v;
  for (auto l : unknown) row_v.push_back(lt.vertex(l));
  for (auto l : known) col_v.push_back(lt.vertex(l));
  LabeledMatrix d({unknown.begin(), unknown.end()}, {known.begin(), known.end()});
  for (std::size_t i = 0; i < row_v.size(); ++i) {
    for (std::size_t j = 0; j < col_v.size(); ++j) {
      d(i, j) = path_distance(lt.tree(), row_v[i], col_v[j]);
    }
  }
  return d;
}

LabeledMatrix pairwise_leaf_distances(const LabeledMergeTree& lt,
                                      std::span<const Label> labels) {
  std::vector<VertexId> vs;
  for (auto l : labels) vs.push_back(lt.leaf(l));
  LabeledMatrix d({labels.begin(), labels.end()}, {labels.begin(), labels.end()});
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const double v = path_distance(lt.tree(), vs[i], vs[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

namespace {

using Clock = std::chrono::steady_clock;

double Norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double DiffNorm(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<Label> Without(const std::vector<Label>& all,
                           const std::vector<Label>& removed) {
  std::vector<Label> sorted_removed = removed;
  std::sort(sorted_removed.begin(), sorted_removed.end());
  std::vector<Label> out;
  for (auto l : all) {
    if (!std::binary_search(sorted_removed.begin(), sorted_removed.end(), l)) {
      out.push_back(l);
    }
  }
  return out;
}

// A comparison seen from the pivot: the tree with more unknown-labeled
// leaves, or on equal counts the one whose unknown list sorts first.
struct Oriented {
  const LabeledMergeTree* pivot;
  const LabeledMergeTree* other;
  Side pivot_side;
  AgreementCase kind;
  std::vector<Label> known;
  std::vector<Label> unknown_pivot;
  std::vector<Label> unknown_other;
};

Oriented Orient(const LabeledMergeTree& a, const LabeledMergeTree& b,
                Agreement agreement) {
  if (a.leaf_count() == 0 || b.leaf_count() == 0) {
    throw Error(ErrorCode::kEmptyTree, "tree without leaves");
  }
  auto& ua = agreement.unknown_leaves_a;
  auto& ub = agreement.unknown_leaves_b;
  const bool a_pivot =
      ua.size() != ub.size() ? ua.size() > ub.size()
                             : !std::lexicographical_compare(ub.begin(), ub.end(),
                                                             ua.begin(), ua.end());
  if (a_pivot) {
    return {&a, &b, Side::kA, agreement.kind, std::move(agreement.known),
            std::move(ua), std::move(ub)};
  }
  return {&b, &a, Side::kB, agreement.kind, std::move(agreement.known),
          std::move(ub), std::move(ua)};
}

struct PairUp {
  std::vector<std::pair<Label, Label>> pairs;  // (pivot, other)
  std::vector<Label> unmatched_pivot;
  std::vector<Label> unmatched_other;
};

// Minimum-weight maximum matching between the given unknown leaves. With
// shared labels rows are compared as distance vectors to the known leaves;
// without them only the norms of the leaf-to-leaf distance rows are
// compared, since the rows have no common column order.
PairUp MatchLeaves(const Oriented& o, const std::vector<Label>& rows,
                   const std::vector<Label>& cols) {
  PairUp out;
  if (rows.empty() || cols.empty()) {
    out.unmatched_pivot = rows;
    out.unmatched_other = cols;
    return out;
  }
  CostMatrix w(rows.size(), cols.size());
  if (o.kind == AgreementCase::kDisagreement) {
    const auto d1 = pairwise_leaf_distances(*o.pivot, rows);
    const auto d2 = pairwise_leaf_distances(*o.other, cols);
    std::vector<double> n2(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) n2[j] = Norm(d2.row(j));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double n1 = Norm(d1.row(i));
      for (std::size_t j = 0; j < cols.size(); ++j) w(i, j) = std::abs(n1 - n2[j]);
    }
  } else {
    const auto d1 = unknown_to_known_distances(*o.pivot, rows, o.known);
    const auto d2 = unknown_to_known_distances(*o.other, cols, o.known);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        w(i, j) = DiffNorm(d1.row(i), d2.row(j));
      }
    }
  }
  const auto assignment = solve_assignment(w);
  for (auto [i, j] : assignment.pairs) out.pairs.emplace_back(rows[i], cols[j]);
  for (auto i : assignment.unmatched_rows) out.unmatched_pivot.push_back(rows[i]);
  for (auto j : assignment.unmatched_cols) out.unmatched_other.push_back(cols[j]);
  return out;
}

// Smallest S entry of each dropped pivot leaf over the surviving pivot leaves.
std::map<Label, double> Deltas(const Oriented& o, const std::vector<Label>& dropped,
                               const SMatrix* s) {
  std::map<Label, double> deltas;
  if (dropped.empty()) return deltas;
  const auto survivors = Without(o.pivot->leaf_keys(), dropped);
  if (survivors.empty()) {
    throw Error(ErrorCode::kEmptyTree, "every pivot leaf was dropped");
  }
  SMatrix local;
  if (s == nullptr) {
    local = build_s_matrix(*o.pivot, dropped, survivors);
    s = &local;
  }
  const auto& cols = s->values.col_labels();
  const auto& rows = s->values.row_labels();
  for (auto label : dropped) {
    const auto i = static_cast<std::size_t>(
        std::find(rows.begin(), rows.end(), label) - rows.begin());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (std::binary_search(survivors.begin(), survivors.end(), cols[j])) {
        best = std::min(best, s->values(i, j));
      }
    }
    deltas.emplace(label, best);
  }
  return deltas;
}

double Combine(double epsilon, const std::map<Label, double>& deltas) {
  double worst_delta = 0.0;
  for (const auto& [label, d] : deltas) worst_delta = std::max(worst_delta, d);
  return std::max(0.5 * worst_delta, epsilon);
}

// Fills induced matrices, matching and relabeling in a/b orientation from
// the pivot-side view. `other_vertices` gives the vertex of the other tree
// standing for each entry of `pivot_labels`.
void Finish(const Oriented& o, const std::vector<Label>& pivot_labels,
            const std::vector<Label>& other_labels,
            const std::vector<VertexId>& other_vertices, const PairUp& pairing,
            MethodResult& r) {
  auto m_pivot = induced_matrix(*o.pivot, pivot_labels);
  const auto& tree = o.other->tree();
  LabeledMatrix m_other(pivot_labels, pivot_labels);
  for (std::size_t i = 0; i < other_vertices.size(); ++i) {
    m_other(i, i) = tree.scalar(other_vertices[i]);
    for (std::size_t j = i + 1; j < other_vertices.size(); ++j) {
      const double s = tree.scalar(tree.lca(other_vertices[i], other_vertices[j]));
      m_other(i, j) = s;
      m_other(j, i) = s;
    }
  }
  r.epsilon = inf_norm_diff(m_pivot, m_other);
  r.pivot = o.pivot_side;
  r.agreement = o.kind;

  if (o.pivot_side == Side::kA) {
    r.induced_a = std::move(m_pivot);
    r.induced_b = std::move(m_other);
    for (auto [p, q] : pairing.pairs) {
      r.matching.pairs.emplace_back(p, q);
      r.relabeling.emplace(q, p);
    }
    r.matching.unmatched_a = pairing.unmatched_pivot;
    r.matching.unmatched_b = pairing.unmatched_other;
  } else {
    // Present b's matrix under a's label names.
    std::vector<Label> a_names = other_labels;
    a_names.resize(pivot_labels.size());
    for (std::size_t i = other_labels.size(); i < pivot_labels.size(); ++i) {
      a_names[i] = pivot_labels[i];
    }
    r.induced_a = m_other.Relabeled(a_names, a_names);
    r.induced_b = m_pivot.Relabeled(a_names, a_names);
    for (auto [p, q] : pairing.pairs) {
      r.matching.pairs.emplace_back(q, p);
      r.relabeling.emplace(p, q);
    }
    r.matching.unmatched_a = pairing.unmatched_other;
    r.matching.unmatched_b = pairing.unmatched_pivot;
  }
}

// Induced matrices over the known labels plus the matched pairs.
void CompareMatched(const Oriented& o, const PairUp& pairing, MethodResult& r) {
  std::vector<Label> pivot_labels = o.known;
  std::vector<Label> other_labels = o.known;
  for (auto [p, q] : pairing.pairs) {
    pivot_labels.push_back(p);
    other_labels.push_back(q);
  }
  std::vector<VertexId> other_vertices;
  for (auto l : other_labels) other_vertices.push_back(o.other->vertex(l));
  Finish(o, pivot_labels, other_labels, other_vertices, pairing, r);
}

template <typename F>
MethodResult Timed(F&& body) {
  const auto start = Clock::now();
  MethodResult r = body();
  r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return r;
}

MethodResult FullAgreement(const LabeledMergeTree& a, const LabeledMergeTree& b,
                           const Agreement& agreement, Method method) {
  if (agreement.kind != AgreementCase::kFull) {
    throw Error(ErrorCode::kNotFullAgreement, "trees do not share all leaf labels");
  }
  MethodResult r;
  r.method = method;
  r.agreement = AgreementCase::kFull;
  r.induced_a = induced_matrix(a, agreement.known);
  r.induced_b = induced_matrix(b, agreement.known);
  r.epsilon = inf_norm_diff(r.induced_a, r.induced_b);
  r.distance = r.epsilon;
  return r;
}

}  // namespace

MethodResult elm_distance(const LabeledMergeTree& a, const LabeledMergeTree& b) {
  return Timed([&] {
    auto agreement = classify_agreement(a, b);
    if (agreement.kind == AgreementCase::kFull) {
      return FullAgreement(a, b, agreement, Method::kElm);
    }
    const auto o = Orient(a, b, std::move(agreement));
    MethodResult r;
    r.method = Method::kElm;

    const auto surplus = o.unknown_pivot.size() - o.unknown_other.size();
    SMatrix s;
    if (surplus > 0) {
      s = build_s_matrix(*o.pivot, o.unknown_pivot, o.pivot->leaf_keys());
      r.trimmed = select_trim(s, surplus);
    }
    const auto survivors = Without(o.unknown_pivot, r.trimmed);
    const auto pairing = MatchLeaves(o, survivors, o.unknown_other);
    CompareMatched(o, pairing, r);
    r.deltas = Deltas(o, r.trimmed, surplus > 0 ? &s : nullptr);
    r.distance = Combine(r.epsilon, r.deltas);
    return r;
  });
}

MethodResult mmb_distance(const LabeledMergeTree& a, const LabeledMergeTree& b) {
  return Timed([&] {
    auto agreement = classify_agreement(a, b);
    if (agreement.kind == AgreementCase::kFull) {
      return FullAgreement(a, b, agreement, Method::kMmb);
    }
    const auto o = Orient(a, b, std::move(agreement));
    MethodResult r;
    r.method = Method::kMmb;
    const auto pairing = MatchLeaves(o, o.unknown_pivot, o.unknown_other);
    CompareMatched(o, pairing, r);
    r.deltas = Deltas(o, pairing.unmatched_pivot, nullptr);
    r.distance = Combine(r.epsilon, r.deltas);
    return r;
  });
}

MethodResult greedy_distance(const LabeledMergeTree& a, const LabeledMergeTree& b) {
  return Timed([&] {
    auto agreement = classify_agreement(a, b);
    if (agreement.kind == AgreementCase::kFull) {
      return FullAgreement(a, b, agreement, Method::kGreedy);
    }
    if (agreement.kind == AgreementCase::kDisagreement) {
      throw Error(ErrorCode::kDisagreementUnsupported,
                  "greedy baseline needs at least one shared label");
    }
    const auto o = Orient(a, b, std::move(agreement));
    MethodResult r;
    r.method = Method::kGreedy;
    const auto pairing = MatchLeaves(o, o.unknown_pivot, o.unknown_other);

    // Newly known labels: shared labels plus matched pairs.
    std::vector<Label> pivot_labels = o.known;
    std::vector<Label> other_labels = o.known;
    for (auto [p, q] : pairing.pairs) {
      pivot_labels.push_back(p);
      other_labels.push_back(q);
    }
    const auto& ptree = o.pivot->tree();
    const auto& otree = o.other->tree();
    std::vector<VertexId> pivot_known, other_vertices;
    for (auto l : pivot_labels) pivot_known.push_back(o.pivot->vertex(l));
    for (auto l : other_labels) other_vertices.push_back(o.other->vertex(l));

    const auto k = other_vertices.size();
    std::vector<double> ds(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double d = path_distance(otree, other_vertices[i], other_vertices[j]);
        ds[i * k + j] = d;
        ds[j * k + i] = d;
      }
    }
    std::vector<double> di(k);
    for (auto label : pairing.unmatched_pivot) {
      const auto v = o.pivot->vertex(label);
      for (std::size_t j = 0; j < k; ++j) di[j] = path_distance(ptree, v, pivot_known[j]);
      std::size_t best = 0;
      double best_norm = std::numeric_limits<double>::infinity();
      for (std::size_t row = 0; row < k; ++row) {
        const double n = DiffNorm({ds.data() + row * k, k}, di);
        if (n < best_norm) {
          best_norm = n;
          best = row;
        }
      }
      r.greedy_assignments.emplace(label, other_labels[best]);
      pivot_labels.push_back(label);
      other_vertices.push_back(other_vertices[best]);
    }
    Finish(o, pivot_labels, other_labels, other_vertices, pairing, r);
    r.distance = r.epsilon;
    return r;
  });
}

MethodResult full_agreement_distance(const LabeledMergeTree& a,
                                     const LabeledMergeTree& b) {
  return Timed([&] { return FullAgreement(a, b, classify_agreement(a, b), Method::kFull); });
}

double evaluate_objective(const LabeledMergeTree& a, const LabeledMergeTree& b,
                          std::span<const Label> dropped_a,
                          std::span<const Label> dropped_b,
                          std::span<const std::pair<Label, Label>> pairs) {
  const auto agreement = classify_agreement(a, b);
  std::vector<Label> labels_a = agreement.known;
  std::vector<Label> labels_b = agreement.known;
  for (auto [x, y] : pairs) {
    labels_a.push_back(x);
    labels_b.push_back(y);
  }
  const auto ma = induced_matrix(a, labels_a);
  const auto mb = induced_matrix(b, labels_b).Relabeled(labels_a, labels_a);
  const double epsilon = inf_norm_diff(ma, mb);

  double worst_delta = 0.0;
  auto charge = [&](const LabeledMergeTree& t, std::span<const Label> dropped) {
    const auto& tree = t.tree();
    for (auto x : dropped) {
      const auto vx = t.leaf(x);
      double best = std::numeric_limits<double>::infinity();
      for (auto y : t.leaf_keys()) {
        if (std::find(dropped.begin(), dropped.end(), y) != dropped.end()) continue;
        best = std::min(best, tree.scalar(tree.lca(vx, t.leaf(y))) - tree.scalar(vx));
      }
      worst_delta = std::max(worst_delta, best);
    }
  };
  charge(a, dropped_a);
  charge(b, dropped_b);
  return std::max(0.5 * worst_delta, epsilon);
}

double reevaluate(const LabeledMergeTree& a, const LabeledMergeTree& b,
                  const MethodResult& result) {
  std::vector<Label> dropped_a = result.matching.unmatched_a;
  std::vector<Label> dropped_b = result.matching.unmatched_b;
  auto& trimmed_side = result.pivot == Side::kA ? dropped_a : dropped_b;
  trimmed_side.insert(trimmed_side.end(), result.trimmed.begin(), result.trimmed.end());
  return evaluate_objective(a, b, dropped_a, dropped_b, result.matching.pairs);
}

double oracle_min_objective(const LabeledMergeTree& a, const LabeledMergeTree& b) {
  const auto agreement = classify_agreement(a, b);
  if (agreement.kind == AgreementCase::kFull) {
    return inf_norm_diff(induced_matrix(a, agreement.known),
                         induced_matrix(b, agreement.known));
  }
  const auto& ua = agreement.unknown_leaves_a;
  const auto& ub = agreement.unknown_leaves_b;
  if (ua.size() + ub.size() > kOracleMaxUnknownLeaves) {
    throw Error(ErrorCode::kTooLarge,
                "oracle limited to " + std::to_string(kOracleMaxUnknownLeaves) +
                    " unknown leaves");
  }
  const bool a_larger = ua.size() >= ub.size();
  const auto& big = a_larger ? ua : ub;
  auto small = a_larger ? ub : ua;
  const auto n = big.size();
  const auto keep = small.size();

  double best = std::numeric_limits<double>::infinity();
  // Enumerate survivors of `big` as a bitmask with exactly `keep` bits set.
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != keep) continue;
    std::vector<Label> survivors, dropped;
    for (std::size_t i = 0; i < n; ++i) {
      ((mask >> i) & 1u ? survivors : dropped).push_back(big[i]);
    }
    std::sort(small.begin(), small.end());
    do {
      std::vector<std::pair<Label, Label>> pairs;
      for (std::size_t i = 0; i < keep; ++i) {
        pairs.emplace_back(a_larger ? survivors[i] : small[i],
                           a_larger ? small[i] : survivors[i]);
      }
      const std::vector<Label> none;
      const double value =
          a_larger ? evaluate_objective(a, b, dropped, none, pairs)
                   : evaluate_objective(a, b, none, dropped, pairs);
      best = std::min(best, value);
    } while (std::next_permutation(small.begin(), small.end()));
  }
  return best;
}

MethodResult compute_distance(Method method, const LabeledMergeTree& a,
                              const LabeledMergeTree& b) {
  switch (method) {
    case Method::kElm: return elm_distance(a, b);
    case Method::kMmb: return mmb_distance(a, b);
    case Method::kGreedy: return greedy_distance(a, b);
    case Method::kFull: return full_agreement_distance(a, b);
    case Method::kOracle:
      return Timed([&] {
        MethodResult r;
        r.method = Method::kOracle;
        r.agreement = classify_agreement(a, b).kind;
        r.distance = oracle_min_objective(a, b);
        return r;
      });
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

}  // namespace mtdist
