/* Copyright 2026 The mtdist Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libmtdist.
 *
 * Every function returns an mt_status. On failure a message describing the
 * last error of the calling thread is available from mt_last_error(). Objects
 * are opaque and owned by the caller once returned; release them with the
 * matching *_free function. Strings returned through char** are released
 * with mt_string_free.
 */

#ifndef MTDIST_MTDIST_H_
#define MTDIST_MTDIST_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MTDIST_BUILDING_LIBRARY)
#define MT_API __declspec(dllexport)
#else
#define MT_API __declspec(dllimport)
#endif
#else
#define MT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mt_status {
  MT_OK = 0,
  MT_ERR_INVALID_ARGUMENT,
  MT_ERR_CYCLE_DETECTED,
  MT_ERR_MULTIPLE_ROOTS,
  MT_ERR_NON_DECREASING_SCALAR,
  MT_ERR_DISCONNECTED_VERTEX,
  MT_ERR_INVALID_VERTEX,
  MT_ERR_UNLABELED_LEAF,
  MT_ERR_LABEL_ON_COLLAPSED_VERTEX,
  MT_ERR_UNKNOWN_LABEL,
  MT_ERR_NON_LEAF_LABEL,
  MT_ERR_LABEL_MISMATCH,
  MT_ERR_K_TOO_LARGE,
  MT_ERR_NON_FINITE,
  MT_ERR_EMPTY_TREE,
  MT_ERR_DISAGREEMENT_UNSUPPORTED,
  MT_ERR_NOT_FULL_AGREEMENT,
  MT_ERR_TOO_LARGE,
  MT_ERR_TOO_SMALL,
  MT_ERR_TOO_MANY_DELETIONS,
  MT_ERR_SYNTAX,
  MT_ERR_DUPLICATE_LABEL,
  MT_ERR_IO,
  MT_ERR_NULL_ARGUMENT,
  MT_ERR_INTERNAL
} mt_status;

typedef struct mt_tree mt_tree;
typedef struct mt_result mt_result;
typedef struct mt_matrix mt_matrix;
typedef struct mt_ensemble mt_ensemble;
typedef struct mt_report mt_report;

MT_API const char* mt_status_string(mt_status status);
/* Message of the last failed call on this thread; "" if none. */
MT_API const char* mt_last_error(void);
MT_API void mt_string_free(char* s);

/* ---- trees ---- */

/* Fresh labels for "-1" entries start above this base. Multi-file loads
 * should use mt_fresh_label_base(index) per file. */
MT_API int64_t mt_fresh_label_base(size_t file_index);

MT_API mt_status mt_tree_parse(const char* text, size_t length, int64_t fresh_label_base,
                               mt_tree** out);
MT_API mt_status mt_tree_load(const char* path, int64_t fresh_label_base, mt_tree** out);
MT_API mt_status mt_tree_save(const mt_tree* tree, const char* path);
MT_API mt_status mt_tree_to_text(const mt_tree* tree, char** out);
MT_API size_t mt_tree_vertex_count(const mt_tree* tree);
MT_API size_t mt_tree_leaf_count(const mt_tree* tree);
MT_API void mt_tree_free(mt_tree* tree);

/* ---- single distances ---- */

/* method: "elm", "mmb", "greedy", "full" or "oracle". */
MT_API mt_status mt_distance(const char* method, const mt_tree* a, const mt_tree* b,
                             mt_result** out);
MT_API double mt_result_distance(const mt_result* result);
MT_API double mt_result_epsilon(const mt_result* result);
/* "full", "partial" or "disagreement". */
MT_API const char* mt_result_agreement(const mt_result* result);
/* 0 when the first tree is the pivot, 1 otherwise. */
MT_API int mt_result_pivot(const mt_result* result);
MT_API size_t mt_result_trimmed_count(const mt_result* result);
MT_API int64_t mt_result_trimmed(const mt_result* result, size_t index);
MT_API size_t mt_result_match_count(const mt_result* result);
MT_API mt_status mt_result_match(const mt_result* result, size_t index, int64_t* label_a,
                                 int64_t* label_b);
MT_API int64_t mt_result_wall_time_ns(const mt_result* result);
/* Multi-line "key: value" description. */
MT_API mt_status mt_result_format(const mt_result* result, char** out);
MT_API void mt_result_free(mt_result* result);

/* ---- distance matrices ---- */

/* Loads the files as members (id = file name without extension), sorted by
 * id, and evaluates every unordered pair. Failed cells are NaN and counted in
 * mt_matrix_failure_count; the call itself still returns MT_OK. */
MT_API mt_status mt_matrix_compute(const char* method, const char* const* paths, size_t count,
                                   size_t workers, mt_matrix** out);
MT_API size_t mt_matrix_size(const mt_matrix* matrix);
MT_API const char* mt_matrix_id(const mt_matrix* matrix, size_t index);
MT_API double mt_matrix_get(const mt_matrix* matrix, size_t i, size_t j);
MT_API size_t mt_matrix_pair_count(const mt_matrix* matrix);
MT_API size_t mt_matrix_failure_count(const mt_matrix* matrix);
/* Description of failure `index`, e.g. "a b: DisagreementUnsupported: ...". */
MT_API const char* mt_matrix_failure(const mt_matrix* matrix, size_t index);
MT_API int64_t mt_matrix_method_time_ns(const mt_matrix* matrix);
MT_API mt_status mt_matrix_csv(const mt_matrix* matrix, char** out);
MT_API mt_status mt_matrix_write_csv(const mt_matrix* matrix, const char* path);
MT_API mt_status mt_matrix_write_heatmap(const mt_matrix* matrix, const char* path);
MT_API void mt_matrix_free(mt_matrix* matrix);

/* ---- comparison and timing ---- */

MT_API mt_status mt_compare(const char* const* paths, size_t count, size_t workers,
                            mt_report** out);
MT_API mt_status mt_report_text(const mt_report* report, char** out);
/* pairs.csv, report.txt, per-method CSVs and comparison heatmaps. */
MT_API mt_status mt_report_write(const mt_report* report, const char* out_dir);
MT_API size_t mt_report_failed_pairs(const mt_report* report);
MT_API void mt_report_free(mt_report* report);

/* Serial full-matrix timings of elm, mmb and greedy; writes a text table. */
MT_API mt_status mt_bench(const char* const* paths, size_t count, size_t repeat, char** out);

/* ---- ensembles ---- */

/* preset: "random_50", "random_100", "random_200", "random_500". count and
 * label_fraction override the preset when positive. */
MT_API mt_status mt_ensemble_generate(const char* preset, uint64_t seed, size_t count,
                                      double label_fraction, mt_ensemble** out);
MT_API size_t mt_ensemble_size(const mt_ensemble* ensemble);
/* Copy of member `index`. */
MT_API mt_status mt_ensemble_tree(const mt_ensemble* ensemble, size_t index, mt_tree** out);
/* Member files plus manifest.json. */
MT_API mt_status mt_ensemble_write(const mt_ensemble* ensemble, const char* out_dir);
MT_API void mt_ensemble_free(mt_ensemble* ensemble);

#ifdef __cplusplus
}
#endif

#endif /* MTDIST_MTDIST_H_ */
