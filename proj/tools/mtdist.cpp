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

// mtdist command line.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 partial failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtdist/mtdist.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

int Report(mt_status status) {
  std::fprintf(stderr, "error: %s: %s\n", mt_status_string(status), mt_last_error());
  return status == MT_ERR_INVALID_ARGUMENT || status == MT_ERR_NULL_ARGUMENT ? kExitUsage
                                                                              : kExitData;
}

std::size_t DefaultWorkers() {
  const char* env = std::getenv("MT_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  return end != env && *end == '\0' && v >= 1 ? static_cast<std::size_t>(v) : 1;
}

std::vector<const char*> CStrings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

void PrintAndFree(char* text) {
  std::fputs(text, stdout);
  mt_string_free(text);
}

struct GenArgs {
  std::string preset = "random_50";
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double label_fraction = 0.0;
  std::string out;
};

int Gen(const GenArgs& args) {
  mt_ensemble* ensemble = nullptr;
  if (auto s = mt_ensemble_generate(args.preset.c_str(), args.seed, args.count,
                                    args.label_fraction, &ensemble);
      s != MT_OK) {
    return Report(s);
  }
  const auto s = mt_ensemble_write(ensemble, args.out.c_str());
  const auto n = mt_ensemble_size(ensemble);
  mt_ensemble_free(ensemble);
  if (s != MT_OK) return Report(s);
  std::printf("wrote %zu trees and manifest.json to %s\n", n, args.out.c_str());
  return kExitOk;
}

struct DistArgs {
  std::string method;
  std::string a;
  std::string b;
};

int Dist(const DistArgs& args) {
  mt_tree* a = nullptr;
  mt_tree* b = nullptr;
  mt_result* r = nullptr;
  mt_status s = mt_tree_load(args.a.c_str(), mt_fresh_label_base(0), &a);
  if (s == MT_OK) s = mt_tree_load(args.b.c_str(), mt_fresh_label_base(1), &b);
  if (s == MT_OK) s = mt_distance(args.method.c_str(), a, b, &r);
  char* text = nullptr;
  if (s == MT_OK) s = mt_result_format(r, &text);
  mt_result_free(r);
  mt_tree_free(a);
  mt_tree_free(b);
  if (s != MT_OK) return Report(s);
  PrintAndFree(text);
  return kExitOk;
}

struct BatchArgs {
  std::string method = "elm";
  std::string out;
  std::string heatmap;
  std::size_t workers = 0;
  std::size_t repeat = 1;
  std::vector<std::string> inputs;
};

int Matrix(const BatchArgs& args) {
  const auto paths = CStrings(args.inputs);
  mt_matrix* m = nullptr;
  if (auto s = mt_matrix_compute(args.method.c_str(), paths.data(), paths.size(), args.workers,
                                 &m);
      s != MT_OK) {
    return Report(s);
  }
  mt_status s = MT_OK;
  if (!args.out.empty()) s = mt_matrix_write_csv(m, args.out.c_str());
  if (s == MT_OK && !args.heatmap.empty()) s = mt_matrix_write_heatmap(m, args.heatmap.c_str());
  if (s != MT_OK) {
    mt_matrix_free(m);
    return Report(s);
  }
  if (args.out.empty()) {
    // CSV to stdout; the summary goes to stderr.
    char* csv = nullptr;
    if (auto cs = mt_matrix_csv(m, &csv); cs != MT_OK) {
      mt_matrix_free(m);
      return Report(cs);
    }
    PrintAndFree(csv);
  }
  FILE* summary = args.out.empty() ? stderr : stdout;
  const auto failures = mt_matrix_failure_count(m);
  std::fprintf(summary, "method: %s\npairs: %zu\nfailures: %zu\nmethod_time_s: %.6f\n",
               args.method.c_str(), mt_matrix_pair_count(m), failures,
               static_cast<double>(mt_matrix_method_time_ns(m)) * 1e-9);
  for (std::size_t k = 0; k < failures; ++k) {
    std::fprintf(stderr, "failed: %s\n", mt_matrix_failure(m, k));
  }
  mt_matrix_free(m);
  return failures == 0 ? kExitOk : kExitPartial;
}

int Compare(const BatchArgs& args) {
  const auto paths = CStrings(args.inputs);
  mt_report* r = nullptr;
  if (auto s = mt_compare(paths.data(), paths.size(), args.workers, &r); s != MT_OK) {
    return Report(s);
  }
  char* text = nullptr;
  mt_status s = mt_report_text(r, &text);
  if (s == MT_OK && !args.out.empty()) s = mt_report_write(r, args.out.c_str());
  const auto failed = mt_report_failed_pairs(r);
  mt_report_free(r);
  if (s != MT_OK) {
    mt_string_free(text);
    return Report(s);
  }
  PrintAndFree(text);
  return failed == 0 ? kExitOk : kExitPartial;
}

int Bench(const BatchArgs& args) {
  const auto paths = CStrings(args.inputs);
  char* text = nullptr;
  if (auto s = mt_bench(paths.data(), paths.size(), args.repeat, &text); s != MT_OK) {
    return Report(s);
  }
  PrintAndFree(text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heuristic interleaving distances between partially labeled merge trees"};
  app.require_subcommand(1);
  const std::vector<std::string> methods{"elm", "mmb", "greedy", "full", "oracle"};
  const std::vector<std::string> presets{"random_50", "random_100", "random_200", "random_500"};

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic ensemble");
  gen_cmd->add_option("--preset", gen.preset, "Ensemble preset")
      ->check(CLI::IsMember(presets))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "Number of trees (default: preset)")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--label-fraction", gen.label_fraction,
                      "Fraction of leaves with shared labels (default: preset)")
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1]"));
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "Distance between two trees");
  dist_cmd->add_option("method", dist.method, "elm, mmb, greedy, full or oracle")
      ->required()
      ->check(CLI::IsMember(methods));
  dist_cmd->add_option("a", dist.a, "First tree")->required();
  dist_cmd->add_option("b", dist.b, "Second tree")->required();

  BatchArgs batch;
  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("inputs", batch.inputs, ".mtree files")->required()->expected(2, -1);
  };
  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", batch.workers, "Worker threads (default: $MT_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* matrix_cmd = app.add_subcommand("matrix", "Pairwise distance matrix");
  matrix_cmd->add_option("--method", batch.method, "Method")
      ->check(CLI::IsMember(methods))
      ->capture_default_str();
  matrix_cmd->add_option("--out", batch.out, "CSV output (default: stdout)");
  matrix_cmd->add_option("--heatmap", batch.heatmap, "Grayscale PPM output");
  add_workers(matrix_cmd);
  add_inputs(matrix_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Compare elm and mmb against greedy");
  compare_cmd->add_option("--out", batch.out, "Directory for CSVs, heatmaps and report");
  add_workers(compare_cmd);
  add_inputs(compare_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "Time full distance matrices");
  bench_cmd->add_option("--repeat", batch.repeat, "Repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_inputs(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (batch.workers == 0) batch.workers = DefaultWorkers();

  if (*gen_cmd) return Gen(gen);
  if (*dist_cmd) return Dist(dist);
  if (*matrix_cmd) return Matrix(batch);
  if (*compare_cmd) return Compare(batch);
  if (*bench_cmd) return Bench(batch);
  return kExitUsage;
}
