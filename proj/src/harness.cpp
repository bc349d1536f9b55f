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

#include "mtdist/harness.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <set>
#include <thread>

#include "json.hpp"

namespace mtdist {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Seconds(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) * 1e-9; }

std::string Join(const std::vector<Label>& labels) {
  std::string out;
  for (auto l : labels) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l);
  }
  return out;
}

void CheckUniqueIds(const std::vector<Member>& members) {
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i - 1].id == members[i].id) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate member id '" + members[i].id + "'");
    }
  }
}

// +1, -1 or 0 (equal within a relative tolerance).
int Compare(double x, double y) {
  const double tol = kCompareTolerance * std::max({1.0, std::abs(x), std::abs(y)});
  if (x > y + tol) return 1;
  if (y > x + tol) return -1;
  return 0;
}

void Count(Tally& t, double first, double second) {
  switch (Compare(first, second)) {
    case 1: ++t.first_greater; break;
    case -1: ++t.second_greater; break;
    default: ++t.ties; break;
  }
}

struct Outcome {
  double value = kNaN;
  std::chrono::nanoseconds time{0};
  bool ok = false;
  ErrorCode code = ErrorCode::kInvalidArgument;
  std::string message;
};

Outcome Run(Method method, const LabeledMergeTree& a, const LabeledMergeTree& b) {
  Outcome out;
  const auto start = Clock::now();
  try {
    out.value = compute_distance(method, a, b).distance;
    out.ok = true;
  } catch (const Error& e) {
    out.code = e.code();
    out.message = e.what();
  }
  out.time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

PairComparison Combine(const Member& a, const Member& b, double elm, double mmb,
                       double greedy) {
  const auto agreement = classify_agreement(a.tree, b.tree);
  PairComparison pc;
  pc.id_a = a.id;
  pc.id_b = b.id;
  pc.agreement = agreement.kind;
  pc.elm = elm;
  pc.mmb = mmb;
  pc.greedy = greedy;
  pc.unknown_a = agreement.unknown_labels_a.size();
  pc.unknown_b = agreement.unknown_labels_b.size();
  return pc;
}

void Summarize(ComparisonReport& report, const std::vector<const Member*>& distinct) {
  double diff = 0.0;
  for (const auto& p : report.pairs) {
    diff += std::abs(static_cast<double>(p.unknown_a) - static_cast<double>(p.unknown_b));
    if (std::isnan(p.elm) || std::isnan(p.mmb)) {
      ++report.failed_pairs;
      continue;
    }
    if (p.agreement == AgreementCase::kDisagreement) {
      Count(report.elm_vs_mmb_disagreement, p.elm, p.mmb);
      continue;
    }
    if (std::isnan(p.greedy)) {
      ++report.failed_pairs;
      continue;
    }
    Count(report.greedy_vs_elm, p.greedy, p.elm);
    Count(report.greedy_vs_mmb, p.greedy, p.mmb);
  }
  if (!report.pairs.empty()) {
    report.avg_unknown_difference = diff / static_cast<double>(report.pairs.size());
  }
  double vertices = 0.0;
  for (const auto* m : distinct) vertices += static_cast<double>(m->tree.tree().size());
  if (!distinct.empty()) report.avg_vertices = vertices / static_cast<double>(distinct.size());
}

}  // namespace

Label FreshLabelBaseFor(std::size_t index) {
  return kDefaultFreshLabelBase + static_cast<Label>(index) * 1'000'000'000;
}

std::vector<Member> load_members(const std::vector<std::string>& paths) {
  std::vector<Member> members;
  members.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    members.push_back({std::filesystem::path(paths[i]).stem().string(),
                       load_mtree(paths[i], FreshLabelBaseFor(i))});
  }
  canonicalize_members(members);
  return members;
}

void canonicalize_members(std::vector<Member>& members) {
  std::stable_sort(members.begin(), members.end(),
                   [](const Member& x, const Member& y) { return x.id < y.id; });
  CheckUniqueIds(members);
}

std::vector<Member> ensemble_members(std::vector<LabeledMergeTree> trees) {
  std::vector<Member> members;
  members.reserve(trees.size());
  const int width = trees.size() > 100 ? static_cast<int>(std::to_string(trees.size() - 1).size())
                                        : 2;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "member_%0*zu", width, i);
    members.push_back({buf, std::move(trees[i])});
  }
  return members;
}

std::size_t DefaultWorkers() {
  const char* env = std::getenv("MT_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<std::size_t>(v);
}

MatrixRun compute_matrix(Method method, const std::vector<Member>& members,
                         std::size_t workers) {
  if (workers == 0) throw Error(ErrorCode::kInvalidArgument, "worker count must be >= 1");
  const std::size_t n = members.size();
  MatrixRun run;
  run.method = method;
  run.distances.ids.reserve(n);
  for (const auto& m : members) run.distances.ids.push_back(m.id);
  run.distances.values.assign(n * n, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  run.pair_count = pairs.size();
  std::vector<Outcome> outcomes(pairs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) {
      const auto [i, j] = pairs[k];
      outcomes[k] = Run(method, members[i].tree, members[j].tree);
    }
  };
  const std::size_t threads = std::min(workers, std::max<std::size_t>(pairs.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const auto& o = outcomes[k];
    run.distances(i, j) = run.distances(j, i) = o.value;
    run.method_time += o.time;
    if (!o.ok) run.failures.push_back({i, j, o.code, o.message});
  }
  return run;
}

double Tally::percent(std::size_t count) const {
  const auto t = total();
  return t == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(t);
}

ComparisonReport compare_pairs(
    const std::vector<std::pair<const Member*, const Member*>>& pairs) {
  ComparisonReport report;
  std::vector<const Member*> distinct;
  std::set<const Member*> seen;
  for (const auto& [a, b] : pairs) {
    for (const auto* m : {a, b}) {
      if (seen.insert(m).second) distinct.push_back(m);
    }
    const auto elm = Run(Method::kElm, a->tree, b->tree);
    const auto mmb = Run(Method::kMmb, a->tree, b->tree);
    const auto greedy = Run(Method::kGreedy, a->tree, b->tree);
    report.elm_time += elm.time;
    report.mmb_time += mmb.time;
    report.greedy_time += greedy.time;
    report.pairs.push_back(Combine(*a, *b, elm.value, mmb.value, greedy.value));
  }
  Summarize(report, distinct);
  return report;
}

ComparisonReport compare_members(const std::vector<Member>& members, std::size_t workers) {
  ComparisonReport report;
  for (auto m : {Method::kElm, Method::kMmb, Method::kGreedy}) {
    report.matrices.push_back(compute_matrix(m, members, workers));
  }
  report.elm_time = report.matrices[0].method_time;
  report.mmb_time = report.matrices[1].method_time;
  report.greedy_time = report.matrices[2].method_time;
  const auto& e = report.matrices[0].distances;
  const auto& m = report.matrices[1].distances;
  const auto& g = report.matrices[2].distances;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      report.pairs.push_back(Combine(members[i], members[j], e(i, j), m(i, j), g(i, j)));
    }
  }
  std::vector<const Member*> distinct;
  for (const auto& mem : members) distinct.push_back(&mem);
  Summarize(report, distinct);
  return report;
}

std::string format_report(const ComparisonReport& r) {
  char buf[256];
  std::string out;
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
    out += '\n';
  };
  line("pairs: %zu", r.pairs.size());
  line("failed_pairs: %zu", r.failed_pairs);
  line("greedy_comparable_pairs: %zu", r.greedy_vs_elm.total());
  line("G>M1: %zu (%.1f%%)", r.greedy_vs_elm.first_greater,
       r.greedy_vs_elm.percent(r.greedy_vs_elm.first_greater));
  line("M1>G: %zu (%.1f%%)", r.greedy_vs_elm.second_greater,
       r.greedy_vs_elm.percent(r.greedy_vs_elm.second_greater));
  line("G=M1: %zu (%.1f%%)", r.greedy_vs_elm.ties, r.greedy_vs_elm.percent(r.greedy_vs_elm.ties));
  line("G>M2: %zu (%.1f%%)", r.greedy_vs_mmb.first_greater,
       r.greedy_vs_mmb.percent(r.greedy_vs_mmb.first_greater));
  line("M2>G: %zu (%.1f%%)", r.greedy_vs_mmb.second_greater,
       r.greedy_vs_mmb.percent(r.greedy_vs_mmb.second_greater));
  line("G=M2: %zu (%.1f%%)", r.greedy_vs_mmb.ties, r.greedy_vs_mmb.percent(r.greedy_vs_mmb.ties));
  const auto& d = r.elm_vs_mmb_disagreement;
  line("disagreement_pairs: %zu", d.total());
  line("disagreement M1>M2: %zu  M2>M1: %zu  M1=M2: %zu", d.first_greater, d.second_greater,
       d.ties);
  line("avg_vertices: %.2f", r.avg_vertices);
  line("avg_unknown_difference: %.2f", r.avg_unknown_difference);
  line("time_elm_s: %.6f", Seconds(r.elm_time));
  line("time_mmb_s: %.6f", Seconds(r.mmb_time));
  line("time_greedy_s: %.6f", Seconds(r.greedy_time));
  return out;
}

void write_report(const ComparisonReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create '" + out_dir + "'");
  const fs::path dir(out_dir);

  std::string csv = "id_a,id_b,agreement,unknown_a,unknown_b,elm,mmb,greedy\n";
  for (const auto& p : report.pairs) {
    csv += p.id_a + ',' + p.id_b + ',' + ToString(p.agreement) + ',' +
           std::to_string(p.unknown_a) + ',' + std::to_string(p.unknown_b) + ',' +
           FormatDouble(p.elm) + ',' + FormatDouble(p.mmb) + ',' + FormatDouble(p.greedy) + '\n';
  }
  write_file((dir / "pairs.csv").string(), csv);
  write_file((dir / "report.txt").string(), format_report(report));
  for (const auto& m : report.matrices) {
    write_matrix_csv(m.distances, (dir / (std::string(ToString(m.method)) + ".csv")).string());
  }
  if (report.matrices.size() == 3) {
    const auto& g = report.matrices[2].distances;
    write_comparison_heatmap(report.matrices[0].distances, g,
                             (dir / "elm_vs_greedy.ppm").string());
    write_comparison_heatmap(report.matrices[1].distances, g,
                             (dir / "mmb_vs_greedy.ppm").string());
  }
}

BenchReport bench(const std::vector<Member>& members, const std::vector<Method>& methods,
                  std::size_t repeat) {
  if (repeat == 0) throw Error(ErrorCode::kInvalidArgument, "repeat must be >= 1");
  BenchReport report;
  report.member_count = members.size();
  report.pair_count = members.size() * (members.size() - (members.empty() ? 0 : 1)) / 2;
  report.repeat = repeat;
  report.machine = MachineInfo();
  for (auto m : methods) report.entries.push_back({m, {}, 0.0, 0.0});
  for (std::size_t r = 0; r < repeat; ++r) {
    for (auto& e : report.entries) {
      e.seconds.push_back(Seconds(compute_matrix(e.method, members, 1).method_time));
    }
  }
  for (auto& e : report.entries) {
    double sum = 0.0;
    for (double s : e.seconds) sum += s;
    e.mean = sum / static_cast<double>(e.seconds.size());
    if (e.seconds.size() > 1) {
      double sq = 0.0;
      for (double s : e.seconds) sq += (s - e.mean) * (s - e.mean);
      e.stddev = std::sqrt(sq / static_cast<double>(e.seconds.size() - 1));
    }
  }
  return report;
}

std::string format_bench(const BenchReport& report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "members: %zu\npairs: %zu\nrepeat: %zu\nmachine: %s\n",
                report.member_count, report.pair_count, report.repeat, report.machine.c_str());
  out += buf;
  out += "method    mean_s        stddev_s\n";
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "%-8s  %.6f  %.6f\n", ToString(e.method), e.mean, e.stddev);
    out += buf;
  }
  return out;
}

std::string MachineInfo() {
  std::string out;
  utsname u{};
  if (uname(&u) == 0) {
    out += std::string(u.sysname) + ' ' + u.release + ' ' + u.machine;
  }
  out += "; hardware threads " + std::to_string(std::thread::hardware_concurrency());
#if defined(__clang__)
  out += "; clang " __clang_version__;
#elif defined(__GNUC__)
  out += "; gcc " __VERSION__;
#endif
  return out;
}

std::string format_result(const MethodResult& r) {
  std::string out;
  out += std::string("method: ") + ToString(r.method) + '\n';
  out += std::string("agreement: ") + ToString(r.agreement) + '\n';
  out += std::string("pivot: ") + (r.pivot == Side::kA ? "a" : "b") + '\n';
  out += "distance: " + FormatDouble(r.distance) + '\n';
  if (r.method == Method::kOracle) return out;
  out += "epsilon: " + FormatDouble(r.epsilon) + '\n';
  out += "deltas:";
  for (const auto& [label, d] : r.deltas) out += ' ' + std::to_string(label) + '=' + FormatDouble(d);
  out += '\n';
  out += "matching:";
  for (const auto& [x, y] : r.matching.pairs) {
    out += ' ' + std::to_string(x) + '-' + std::to_string(y);
  }
  out += '\n';
  out += "unmatched_a: " + Join(r.matching.unmatched_a) + '\n';
  out += "unmatched_b: " + Join(r.matching.unmatched_b) + '\n';
  out += "trimmed: " + Join(r.trimmed) + '\n';
  if (!r.greedy_assignments.empty()) {
    out += "greedy_assignments:";
    for (const auto& [from, to] : r.greedy_assignments) {
      out += ' ' + std::to_string(from) + "->" + std::to_string(to);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> write_ensemble(const EnsembleSpec& spec,
                                        const std::string& preset_name,
                                        const std::string& out_dir) {
  return write_ensemble(spec, preset_name, generate_ensemble(spec), out_dir);
}

std::vector<std::string> write_ensemble(const EnsembleSpec& spec,
                                        const std::string& preset_name,
                                        std::vector<LabeledMergeTree> trees,
                                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create '" + out_dir + "'");
  auto members = ensemble_members(std::move(trees));

  nlohmann::ordered_json manifest;
  manifest["format"] = "mtree 1";
  manifest["preset"] = preset_name;
  manifest["seed"] = spec.seed;
  manifest["max_vertices"] = spec.max_vertices;
  manifest["ensemble_size"] = spec.ensemble_size;
  manifest["label_fraction"] = spec.label_fraction;
  manifest["unknown_label_stride"] = kUnknownLabelStride;
  manifest["perturbation"] = spec.perturbation_schedule.empty() ? "default" : "custom";
  auto files = nlohmann::ordered_json::array();
  std::vector<std::string> paths;
  for (const auto& m : members) {
    const auto name = m.id + ".mtree";
    const auto path = (fs::path(out_dir) / name).string();
    save_mtree(m.tree, path);
    files.push_back({{"file", name},
                     {"vertices", m.tree.tree().size()},
                     {"leaves", m.tree.leaf_count()}});
    paths.push_back(path);
  }
  manifest["files"] = files;
  write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + '\n');
  return paths;
}

}  // namespace mtdist
