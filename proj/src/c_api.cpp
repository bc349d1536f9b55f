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

#include "mtdist/mtdist.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "mtdist/harness.hpp"

struct mt_tree {
  mtdist::LabeledMergeTree tree;
};

struct mt_result {
  mtdist::MethodResult result;
};

struct mt_matrix {
  mtdist::MatrixRun run;
  std::vector<std::string> failure_text;
};

struct mt_ensemble {
  mtdist::EnsembleSpec spec;
  std::string preset;
  std::vector<mtdist::LabeledMergeTree> trees;
};

struct mt_report {
  mtdist::ComparisonReport report;
};

namespace {

thread_local std::string g_last_error;

mt_status Fail(mt_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

mt_status FromCode(mtdist::ErrorCode code) {
  return static_cast<mt_status>(static_cast<int>(code) + 1);
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
mt_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MT_OK;
  } catch (const mtdist::Error& e) {
    return Fail(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(MT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(MT_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(MT_ERR_INTERNAL, "unknown error");
  }
}

char* CopyString(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> Paths(const char* const* paths, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (paths[i] == nullptr) {
      throw mtdist::Error(mtdist::ErrorCode::kInvalidArgument, "null path");
    }
    out.emplace_back(paths[i]);
  }
  return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

#define MT_REQUIRE(cond)                                                  \
  do {                                                                    \
    if (!(cond)) return Fail(MT_ERR_NULL_ARGUMENT, "null argument: " #cond); \
  } while (0)

extern "C" {

const char* mt_status_string(mt_status status) {
  switch (status) {
    case MT_OK: return "Ok";
    case MT_ERR_NULL_ARGUMENT: return "NullArgument";
    case MT_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(mtdist::ErrorCode::kIoFailure)) {
    return mtdist::ToString(static_cast<mtdist::ErrorCode>(code));
  }
  return "Unknown";
}

const char* mt_last_error(void) { return g_last_error.c_str(); }

void mt_string_free(char* s) { std::free(s); }

int64_t mt_fresh_label_base(size_t file_index) {
  return mtdist::FreshLabelBaseFor(file_index);
}

mt_status mt_tree_parse(const char* text, size_t length, int64_t fresh_label_base,
                        mt_tree** out) {
  MT_REQUIRE(text != nullptr && out != nullptr);
  return Guard([&] {
    *out = new mt_tree{mtdist::parse_mtree(std::string_view(text, length), fresh_label_base)};
  });
}

mt_status mt_tree_load(const char* path, int64_t fresh_label_base, mt_tree** out) {
  MT_REQUIRE(path != nullptr && out != nullptr);
  return Guard([&] { *out = new mt_tree{mtdist::load_mtree(path, fresh_label_base)}; });
}

mt_status mt_tree_save(const mt_tree* tree, const char* path) {
  MT_REQUIRE(tree != nullptr && path != nullptr);
  return Guard([&] { mtdist::save_mtree(tree->tree, path); });
}

mt_status mt_tree_to_text(const mt_tree* tree, char** out) {
  MT_REQUIRE(tree != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(mtdist::write_mtree(tree->tree)); });
}

size_t mt_tree_vertex_count(const mt_tree* tree) {
  return tree == nullptr ? 0 : tree->tree.tree().size();
}

size_t mt_tree_leaf_count(const mt_tree* tree) {
  return tree == nullptr ? 0 : tree->tree.leaf_count();
}

void mt_tree_free(mt_tree* tree) { delete tree; }

mt_status mt_distance(const char* method, const mt_tree* a, const mt_tree* b,
                      mt_result** out) {
  MT_REQUIRE(method != nullptr && a != nullptr && b != nullptr && out != nullptr);
  return Guard([&] {
    *out = new mt_result{mtdist::compute_distance(mtdist::ParseMethod(method), a->tree, b->tree)};
  });
}

double mt_result_distance(const mt_result* r) { return r ? r->result.distance : kNaN; }
double mt_result_epsilon(const mt_result* r) { return r ? r->result.epsilon : kNaN; }

const char* mt_result_agreement(const mt_result* r) {
  return r ? mtdist::ToString(r->result.agreement) : "";
}

int mt_result_pivot(const mt_result* r) {
  return r && r->result.pivot == mtdist::Side::kB ? 1 : 0;
}

size_t mt_result_trimmed_count(const mt_result* r) { return r ? r->result.trimmed.size() : 0; }

int64_t mt_result_trimmed(const mt_result* r, size_t index) {
  return r && index < r->result.trimmed.size() ? r->result.trimmed[index] : 0;
}

size_t mt_result_match_count(const mt_result* r) {
  return r ? r->result.matching.pairs.size() : 0;
}

mt_status mt_result_match(const mt_result* r, size_t index, int64_t* label_a,
                          int64_t* label_b) {
  MT_REQUIRE(r != nullptr && label_a != nullptr && label_b != nullptr);
  if (index >= r->result.matching.pairs.size()) {
    return Fail(MT_ERR_INVALID_ARGUMENT, "match index out of range");
  }
  *label_a = r->result.matching.pairs[index].first;
  *label_b = r->result.matching.pairs[index].second;
  return MT_OK;
}

int64_t mt_result_wall_time_ns(const mt_result* r) {
  return r ? static_cast<int64_t>(r->result.wall_time.count()) : 0;
}

mt_status mt_result_format(const mt_result* r, char** out) {
  MT_REQUIRE(r != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(mtdist::format_result(r->result)); });
}

void mt_result_free(mt_result* r) { delete r; }

mt_status mt_matrix_compute(const char* method, const char* const* paths, size_t count,
                            size_t workers, mt_matrix** out) {
  MT_REQUIRE(method != nullptr && (paths != nullptr || count == 0) && out != nullptr);
  return Guard([&] {
    const auto m = mtdist::ParseMethod(method);
    const auto members = mtdist::load_members(Paths(paths, count));
    auto* matrix = new mt_matrix{mtdist::compute_matrix(m, members, workers), {}};
    for (const auto& f : matrix->run.failures) {
      matrix->failure_text.push_back(members[f.i].id + ' ' + members[f.j].id + ": " + f.message);
    }
    *out = matrix;
  });
}

size_t mt_matrix_size(const mt_matrix* m) { return m ? m->run.distances.size() : 0; }

const char* mt_matrix_id(const mt_matrix* m, size_t index) {
  return m && index < m->run.distances.size() ? m->run.distances.ids[index].c_str() : "";
}

double mt_matrix_get(const mt_matrix* m, size_t i, size_t j) {
  const auto n = mt_matrix_size(m);
  return i < n && j < n ? m->run.distances(i, j) : kNaN;
}

size_t mt_matrix_pair_count(const mt_matrix* m) { return m ? m->run.pair_count : 0; }
size_t mt_matrix_failure_count(const mt_matrix* m) { return m ? m->failure_text.size() : 0; }

const char* mt_matrix_failure(const mt_matrix* m, size_t index) {
  return m && index < m->failure_text.size() ? m->failure_text[index].c_str() : "";
}

int64_t mt_matrix_method_time_ns(const mt_matrix* m) {
  return m ? static_cast<int64_t>(m->run.method_time.count()) : 0;
}

mt_status mt_matrix_csv(const mt_matrix* m, char** out) {
  MT_REQUIRE(m != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(mtdist::matrix_csv(m->run.distances)); });
}

mt_status mt_matrix_write_csv(const mt_matrix* m, const char* path) {
  MT_REQUIRE(m != nullptr && path != nullptr);
  return Guard([&] { mtdist::write_matrix_csv(m->run.distances, path); });
}

mt_status mt_matrix_write_heatmap(const mt_matrix* m, const char* path) {
  MT_REQUIRE(m != nullptr && path != nullptr);
  return Guard([&] { mtdist::write_heatmap(m->run.distances, path); });
}

void mt_matrix_free(mt_matrix* m) { delete m; }

mt_status mt_compare(const char* const* paths, size_t count, size_t workers, mt_report** out) {
  MT_REQUIRE((paths != nullptr || count == 0) && out != nullptr);
  return Guard([&] {
    const auto members = mtdist::load_members(Paths(paths, count));
    *out = new mt_report{mtdist::compare_members(members, workers)};
  });
}

mt_status mt_report_text(const mt_report* r, char** out) {
  MT_REQUIRE(r != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(mtdist::format_report(r->report)); });
}

mt_status mt_report_write(const mt_report* r, const char* out_dir) {
  MT_REQUIRE(r != nullptr && out_dir != nullptr);
  return Guard([&] { mtdist::write_report(r->report, out_dir); });
}

size_t mt_report_failed_pairs(const mt_report* r) { return r ? r->report.failed_pairs : 0; }

void mt_report_free(mt_report* r) { delete r; }

mt_status mt_bench(const char* const* paths, size_t count, size_t repeat, char** out) {
  MT_REQUIRE((paths != nullptr || count == 0) && out != nullptr);
  return Guard([&] {
    const auto members = mtdist::load_members(Paths(paths, count));
    const auto report = mtdist::bench(
        members, {mtdist::Method::kElm, mtdist::Method::kMmb, mtdist::Method::kGreedy}, repeat);
    *out = CopyString(mtdist::format_bench(report));
  });
}

mt_status mt_ensemble_generate(const char* preset, uint64_t seed, size_t count,
                               double label_fraction, mt_ensemble** out) {
  MT_REQUIRE(preset != nullptr && out != nullptr);
  return Guard([&] {
    auto spec = mtdist::preset(preset, seed);
    if (count > 0) spec.ensemble_size = count;
    if (label_fraction > 0.0) spec.label_fraction = label_fraction;
    if (!(spec.label_fraction <= 1.0)) {
      throw mtdist::Error(mtdist::ErrorCode::kInvalidArgument, "label fraction must be in (0, 1]");
    }
    auto trees = mtdist::generate_ensemble(spec);
    *out = new mt_ensemble{spec, preset, std::move(trees)};
  });
}

size_t mt_ensemble_size(const mt_ensemble* e) { return e ? e->trees.size() : 0; }

mt_status mt_ensemble_tree(const mt_ensemble* e, size_t index, mt_tree** out) {
  MT_REQUIRE(e != nullptr && out != nullptr);
  if (index >= e->trees.size()) return Fail(MT_ERR_INVALID_ARGUMENT, "member index out of range");
  return Guard([&] { *out = new mt_tree{e->trees[index]}; });
}

mt_status mt_ensemble_write(const mt_ensemble* e, const char* out_dir) {
  MT_REQUIRE(e != nullptr && out_dir != nullptr);
  return Guard([&] { mtdist::write_ensemble(e->spec, e->preset, e->trees, out_dir); });
}

void mt_ensemble_free(mt_ensemble* e) { delete e; }

}  // extern "C"
