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

// Release acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mtdist/assignment.hpp"
#include "mtdist/harness.hpp"
#include "mtdist/methods.hpp"
#include "test_util.hpp"

namespace mtdist {
namespace {

using testing::Fixture;
using testing::RandomPair;
using testing::Transformed;
using Clock = std::chrono::steady_clock;

constexpr double kGoldenTolerance = 1e-9;
constexpr double kShiftTolerance = 1e-9;
constexpr double kRuntimeMargin = 0.10;     // elm at least 10% faster than greedy
constexpr double kDeskScaleBudget = 600.0;  // seconds

int failures = 0;

void Report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

void GoldenExamples() {
  struct Row {
    const char* a;
    const char* b;
    double want[3];
  } rows[] = {{"ex1_T1.mtree", "ex1_T2.mtree", {0.5, 0.5, 2.0}},
              {"ex2_T1.mtree", "ex2_T2.mtree", {0.5, 0.5, 3.0}},
              {"ex3_T1.mtree", "ex3_T2.mtree", {2.0, 0.5, 1.0}}};
  const Method methods[] = {Method::kElm, Method::kMmb, Method::kGreedy};
  const auto t0 = Clock::now();
  int matched = 0;
  std::string detail;
  for (const auto& r : rows) {
    const auto a = Fixture(r.a);
    const auto b = Fixture(r.b);
    for (int m = 0; m < 3; ++m) {
      const double got = compute_distance(methods[m], a, b).distance;
      if (std::abs(got - r.want[m]) <= kGoldenTolerance) {
        ++matched;
      } else {
        detail += std::string(r.a) + ' ' + ToString(methods[m]) + '=' + FormatDouble(got) + "; ";
      }
    }
  }
  const double secs = SecondsSince(t0);
  Report(1, matched == 9 && secs < 1.0, "golden examples",
         std::to_string(matched) + "/9 within 1e-9, " + Fmt("%.4f s", secs) +
             (detail.empty() ? "" : "; " + detail));
}

// Entry-by-label equality; row order is not part of the checkpoint.
bool SameByLabel(const LabeledMatrix& got, const LabeledMatrix& want) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return false;
  for (auto r : want.row_labels()) {
    for (auto c : want.col_labels()) {
      if (got.at(r, c) != want.at(r, c)) return false;
    }
  }
  return true;
}

void Checkpoints() {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const char* name) {
    if (!ok) bad.push_back(name);
  };
  const auto e1a = Fixture("ex1_T1.mtree");
  const auto e1b = Fixture("ex1_T2.mtree");
  const auto e3a = Fixture("ex3_T1.mtree");
  const auto e3b = Fixture("ex3_T2.mtree");
  const std::vector<Label> cols{1, 2, 3, 4};

  const std::vector<Label> r1{3, 4};
  const auto s1 = build_s_matrix(e1a, r1, cols);
  check(s1.values == LabeledMatrix(r1, cols, {2, 2, 0, 1, 3, 3, 2, 0}) &&
            s1.row_sums == std::vector<double>{5, 8},
        "S ex1");
  const std::vector<Label> k1{1, 2, 4};
  const LabeledMatrix m1(k1, k1, {0, 2, 3, 2, 0, 3, 3, 3, 0});
  const auto elm1 = elm_distance(e1a, e1b);
  check(SameByLabel(elm1.induced_a, m1) && SameByLabel(elm1.induced_b, m1), "M1=M2 ex1");

  const std::vector<Label> r3{2, 3};
  const auto s3 = build_s_matrix(e3a, r3, cols);
  check(s3.values == LabeledMatrix(r3, cols, {1, 0, 3, 3, 1, 1, 0, 1}) &&
            s3.row_sums == std::vector<double>{7, 3},
        "S ex3");
  const auto elm3 = elm_distance(e3a, e3b);
  check(SameByLabel(elm3.induced_a, LabeledMatrix(k1, k1, {0, 1, 3, 1, 0, 3, 3, 3, 1})) &&
            SameByLabel(elm3.induced_b, LabeledMatrix(k1, k1, {0, 3, 3, 3, 2, 3, 3, 3, 1})),
        "induced ex3");

  // The unknown-to-known distance blocks; the stated values belong to the
  // trees of the first example.
  const std::vector<Label> known{1, 2}, up{3, 4}, u2{5};
  check(unknown_to_known_distances(e1a, up, known) == LabeledMatrix(up, known, {5, 5, 6, 6}),
        "U_p");
  check(unknown_to_known_distances(e1b, u2, known) == LabeledMatrix(u2, known, {6, 6}), "U_2");

  std::string detail = "7 checkpoints";
  for (const auto& b : bad) detail += "; mismatch " + b;
  Report(2, bad.empty(), "intermediate checkpoints", detail);
}

void AssignmentOracle() {
  std::mt19937_64 rng(2024);
  int agree = 0;
  const int total = 500;
  for (int t = 0; t < total; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 7);
    CostMatrix c(n, n);
    // Mix of continuous and tie-heavy integer costs.
    const bool ints = t % 2 == 0;
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::uniform_int_distribution<int> small(0, 4);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c(i, j) = ints ? small(rng) : u(rng);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (solve_assignment(c).total_cost == best) ++agree;
  }
  Report(3, agree == total, "assignment vs exhaustive permutations",
         std::to_string(agree) + "/" + std::to_string(total) + " exact");
}

struct Shape {
  std::size_t known, ua, ub;
};

Shape RandomShape(std::mt19937_64& rng, std::size_t max_unknown) {
  std::uniform_int_distribution<std::size_t> k(0, 4);
  for (;;) {
    Shape s{k(rng), std::uniform_int_distribution<std::size_t>(0, max_unknown)(rng), 0};
    s.ub = std::uniform_int_distribution<std::size_t>(0, max_unknown - s.ua)(rng);
    if (s.known + s.ua > 0 && s.known + s.ub > 0) return s;
  }
}

void HeuristicsVsOracle() {
  std::mt19937_64 rng(77);
  int ok = 0, consistent = 0;
  const int total = 200;
  for (int t = 0; t < total; ++t) {
    const auto s = RandomShape(rng, 6);
    const auto p = RandomPair(rng, s.known, s.ua, s.ub);
    const double oracle = oracle_min_objective(p.a, p.b);
    const auto elm = elm_distance(p.a, p.b);
    const auto mmb = mmb_distance(p.a, p.b);
    if (oracle <= elm.distance && oracle <= mmb.distance) ++ok;
    if (reevaluate(p.a, p.b, elm) == elm.distance && reevaluate(p.a, p.b, mmb) == mmb.distance) {
      ++consistent;
    }
  }
  Report(4, ok == total && consistent == total, "oracle bounds heuristics",
         std::to_string(ok) + "/200 bounded, " + std::to_string(consistent) +
             "/200 re-evaluate to reported distance");
}

void Invariance() {
  std::mt19937_64 rng(88);
  const int total = 100;
  int pass = 0;
  double worst_shift = 0.0;
  for (int t = 0; t < total; ++t) {
    auto s = RandomShape(rng, 6);
    if (s.known == 0) s.known = 1;  // keeps greedy applicable
    const auto p = RandomPair(rng, s.known, s.ua, s.ub);
    bool good = true;
    for (auto m : {Method::kElm, Method::kMmb, Method::kGreedy}) {
      const auto r = compute_distance(m, p.a, p.b);
      const auto sh = compute_distance(m, Transformed(p.a, 1.0, -2.5), Transformed(p.b, 1.0, -2.5));
      const double d = std::abs(sh.distance - r.distance);
      worst_shift = std::max(worst_shift, d);
      good = good && d < kShiftTolerance;
      for (double lambda : {0.5, 4.0}) {
        const auto sc =
            compute_distance(m, Transformed(p.a, lambda, 0.0), Transformed(p.b, lambda, 0.0));
        good = good && sc.distance == lambda * r.distance && sc.trimmed == r.trimmed &&
               sc.matching.pairs == r.matching.pairs;
      }
    }
    if (good) ++pass;
  }
  Report(5, pass == total, "shift invariance and scale covariance",
         std::to_string(pass) + "/100 pairs, max shift change " + Fmt("%.3g", worst_shift));
}

void MmbNeverWorse(double& desk_seconds) {
  std::string detail;
  bool ok = true;
  for (const char* name : {"random_50", "random_100"}) {
    const auto t0 = Clock::now();
    const auto members = ensemble_members(generate_ensemble(preset(name, 2026)));
    const auto report = compare_members(members, DefaultWorkers());
    desk_seconds += SecondsSince(t0);
    const auto worse = report.greedy_vs_mmb.second_greater;
    ok = ok && worse == 0 && report.pairs.size() == 190 && report.failed_pairs == 0;
    detail += std::string(name) + ": M2>G " + std::to_string(worse) + " of " +
              std::to_string(report.greedy_vs_mmb.total()) + " comparable, " +
              std::to_string(report.failed_pairs) + " failed; ";
  }
  detail.resize(detail.size() - 2);
  Report(6, ok, "mmb never worse than greedy", detail);
}

void RuntimeOrdering(double desk_seconds) {
  const auto members = ensemble_members(generate_ensemble(preset("random_200", 2026)));
  const auto b = bench(members, {Method::kElm, Method::kMmb, Method::kGreedy}, 5);
  const double elm = b.entries[0].mean, mmb = b.entries[1].mean, greedy = b.entries[2].mean;
  const bool order = elm <= (1.0 - kRuntimeMargin) * greedy && elm <= mmb;
  Report(7, order, "runtime ordering on random_200",
         Fmt("mean s: elm %.4f, mmb %.4f, greedy %.4f", elm, mmb, greedy));
  Report(7, desk_seconds < kDeskScaleBudget, "desk-scale run time",
         Fmt("random_50 + random_100 comparisons in %.1f s", desk_seconds));
}

}  // namespace
}  // namespace mtdist

int main() {
  using namespace mtdist;
  try {
    GoldenExamples();
    Checkpoints();
    AssignmentOracle();
    HeuristicsVsOracle();
    Invariance();
    double desk = 0.0;
    MmbNeverWorse(desk);
    RuntimeOrdering(desk);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
