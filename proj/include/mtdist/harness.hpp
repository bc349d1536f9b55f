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

// Batch runs over collections of trees: distance matrices, method
// comparisons, timing, and ensemble generation on disk.

#ifndef MTDIST_HARNESS_HPP_
#define MTDIST_HARNESS_HPP_

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mtdist/core.hpp"
#include "mtdist/io.hpp"
#include "mtdist/methods.hpp"
#include "mtdist/synth.hpp"

namespace mtdist {

struct Member {
  std::string id;
  LabeledMergeTree tree;
};

// Fresh-label base for the file at position `index` of a multi-file load.
// Bases are 10^9 apart.
Label FreshLabelBaseFor(std::size_t index);

// Loads files; the id of each member is its file name without directory and
// extension. Throws kInvalidArgument on duplicate ids.
std::vector<Member> load_members(const std::vector<std::string>& paths);

// Sorts by id. Throws kInvalidArgument on duplicate ids.
void canonicalize_members(std::vector<Member>& members);

// "member_00", "member_01", ...
std::vector<Member> ensemble_members(std::vector<LabeledMergeTree> trees);

struct PairFailure {
  std::size_t i = 0;
  std::size_t j = 0;
  ErrorCode code = ErrorCode::kInvalidArgument;
  std::string message;
};

struct MatrixRun {
  Method method = Method::kElm;
  DistanceMatrix distances;
  std::vector<PairFailure> failures;  // sorted by (i, j)
  std::size_t pair_count = 0;
  // Summed method execution time over all pairs (parsing excluded).
  std::chrono::nanoseconds method_time{0};
};

// Evaluates every unordered pair once, always as (lower id, higher id).
// Failed cells hold NaN. Members must already be canonical.
MatrixRun compute_matrix(Method method, const std::vector<Member>& members,
                         std::size_t workers = 1);

// Worker count from MT_WORKERS, or 1 when unset or invalid.
std::size_t DefaultWorkers();

struct PairComparison {
  std::string id_a;
  std::string id_b;
  AgreementCase agreement = AgreementCase::kFull;
  double elm = 0.0;
  double mmb = 0.0;
  double greedy = 0.0;  // NaN for disagreement pairs
  std::size_t unknown_a = 0;
  std::size_t unknown_b = 0;
};

// Counts for "x > y", "y > x" and ties over one set of pairs.
struct Tally {
  std::size_t first_greater = 0;
  std::size_t second_greater = 0;
  std::size_t ties = 0;

  std::size_t total() const { return first_greater + second_greater + ties; }
  double percent(std::size_t count) const;
};

struct ComparisonReport {
  std::vector<PairComparison> pairs;
  Tally greedy_vs_elm;  // over pairs where greedy applies
  Tally greedy_vs_mmb;
  Tally elm_vs_mmb_disagreement;  // disagreement pairs only
  std::size_t failed_pairs = 0;
  double avg_vertices = 0.0;
  double avg_unknown_difference = 0.0;
  std::chrono::nanoseconds elm_time{0};
  std::chrono::nanoseconds mmb_time{0};
  std::chrono::nanoseconds greedy_time{0};
  // Full matrices, present when built from a member list.
  std::vector<MatrixRun> matrices;
};

// Values within this of each other count as ties.
inline constexpr double kCompareTolerance = 1e-9;

// Compares explicit pairs.
ComparisonReport compare_pairs(
    const std::vector<std::pair<const Member*, const Member*>>& pairs);

// Compares every unordered pair of a canonical member list.
ComparisonReport compare_members(const std::vector<Member>& members,
                                 std::size_t workers = 1);

std::string format_report(const ComparisonReport& report);
// pairs.csv, report.txt, one matrix CSV per method, and the comparison
// heatmaps elm_vs_greedy.ppm and mmb_vs_greedy.ppm.
void write_report(const ComparisonReport& report, const std::string& out_dir);

struct BenchEntry {
  Method method = Method::kElm;
  std::vector<double> seconds;  // one per repeat
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct BenchReport {
  std::size_t member_count = 0;
  std::size_t pair_count = 0;
  std::size_t repeat = 0;
  std::vector<BenchEntry> entries;
  std::string machine;
};

// Serial full-matrix timings. Methods are interleaved within each repeat.
BenchReport bench(const std::vector<Member>& members, const std::vector<Method>& methods,
                  std::size_t repeat);

std::string format_bench(const BenchReport& report);
std::string MachineInfo();

// Structured text for a single result.
std::string format_result(const MethodResult& result);

// Writes member_NN.mtree files and manifest.json. Returns the file paths.
std::vector<std::string> write_ensemble(const EnsembleSpec& spec,
                                        const std::string& preset_name,
                                        const std::string& out_dir);
// Same, for an already generated ensemble of `spec`.
std::vector<std::string> write_ensemble(const EnsembleSpec& spec,
                                        const std::string& preset_name,
                                        std::vector<LabeledMergeTree> trees,
                                        const std::string& out_dir);

}  // namespace mtdist

#endif  // MTDIST_HARNESS_HPP_
