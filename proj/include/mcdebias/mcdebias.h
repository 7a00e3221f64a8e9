// Copyright 2026 The mcdebias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// C interface to the mcdebias library.
//
// Objects are opaque handles created by *_load / *_create / *_build calls and
// released with the matching *_free. Every fallible call returns an
// mcd_status; on failure mcd_last_error() describes the problem (the message
// is thread-local and valid until the next failing call on that thread).
// Strings returned through char** out-parameters are owned by the caller and
// must be released with mcd_string_free().

#ifndef MCDEBIAS_MCDEBIAS_H_
#define MCDEBIAS_MCDEBIAS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MCD_EXPORT __declspec(dllexport)
#else
#define MCD_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcd_status {
  MCD_OK = 0,
  MCD_ERR_INVALID_ARGUMENT = 1,
  MCD_ERR_IO = 2,
  MCD_ERR_MALFORMED_LINE = 3,
  MCD_ERR_DIMENSION_MISMATCH = 4,
  MCD_ERR_EMPTY_FILE = 5,
  MCD_ERR_ZERO_VECTOR = 6,
  MCD_ERR_NOT_NORMALIZED = 7,
  MCD_ERR_SCHEMA = 8,
  MCD_ERR_EMPTY_SET = 9,
  MCD_ERR_FATAL_VALIDATION = 10,
  MCD_ERR_RANK_DEFICIENT = 11,
  MCD_ERR_SHAPE_MISMATCH = 12,
  MCD_ERR_ZERO_ROW = 13,
  MCD_ERR_NOT_UNIT = 14,
  MCD_ERR_NOT_ORTHONORMAL = 15,
  MCD_ERR_FULLY_CONTAINED = 16,
  MCD_ERR_EQUALIZE_DEGENERATE = 17,
  MCD_ERR_RADICAND_NEGATIVE = 18,
  MCD_ERR_PLAN = 19,
  MCD_ERR_EMPTY_ATTRIBUTE_SET = 20,
  MCD_ERR_LENGTH_MISMATCH = 21,
  MCD_ERR_NO_VALID_GROUPS = 22,
  MCD_ERR_INTERNAL = 99
} mcd_status;

typedef enum mcd_format {
  MCD_FORMAT_WORD2VEC_TEXT = 0,
  MCD_FORMAT_GLOVE_TEXT = 1
} mcd_format;

typedef enum mcd_strategy {
  MCD_STRATEGY_SINGLE = 0,
  MCD_STRATEGY_SEQUENTIAL = 1,
  MCD_STRATEGY_SUM = 2,
  MCD_STRATEGY_MEAN = 3,
  MCD_STRATEGY_JOSEC = 4
} mcd_strategy;

typedef struct mcd_embeddings mcd_embeddings;
typedef struct mcd_category mcd_category;
typedef struct mcd_subspace mcd_subspace;

MCD_EXPORT const char* mcd_last_error(void);
MCD_EXPORT const char* mcd_status_name(mcd_status status);
MCD_EXPORT const char* mcd_version(void);
MCD_EXPORT void mcd_string_free(char* s);

/* ---- embeddings ---------------------------------------------------------- */

/* `duplicates` (nullable) receives the number of repeated words ignored. */
MCD_EXPORT mcd_status mcd_embeddings_load(const char* path, mcd_format format,
                                          mcd_embeddings** out,
                                          size_t* duplicates);
/* Copies `n` words and an n x dim row-major matrix. */
MCD_EXPORT mcd_status mcd_embeddings_create(const char* const* words, size_t n,
                                            const double* values, size_t dim,
                                            mcd_embeddings** out);
MCD_EXPORT mcd_status mcd_embeddings_save(const mcd_embeddings* e,
                                          const char* path, mcd_format format);
MCD_EXPORT mcd_status mcd_embeddings_normalize(const mcd_embeddings* e,
                                               mcd_embeddings** out);
MCD_EXPORT void mcd_embeddings_free(mcd_embeddings* e);
MCD_EXPORT size_t mcd_embeddings_size(const mcd_embeddings* e);
MCD_EXPORT size_t mcd_embeddings_dim(const mcd_embeddings* e);
MCD_EXPORT int mcd_embeddings_is_normalized(const mcd_embeddings* e);
/* 1 if every row has unit norm within `tolerance`. */
MCD_EXPORT int mcd_embeddings_rows_are_unit(const mcd_embeddings* e,
                                            double tolerance);
/* NULL when i is out of range. Valid while `e` lives. */
MCD_EXPORT const char* mcd_embeddings_word(const mcd_embeddings* e, size_t i);
/* Copies the vector of `word` into out[0..dim). */
MCD_EXPORT mcd_status mcd_embeddings_vector(const mcd_embeddings* e,
                                            const char* word, double* out,
                                            size_t dim);

/* ---- category word lists ------------------------------------------------- */

MCD_EXPORT mcd_status mcd_category_load(const char* path, mcd_category** out);
MCD_EXPORT mcd_status mcd_category_parse(const char* json_text,
                                         mcd_category** out);
MCD_EXPORT void mcd_category_free(mcd_category* c);
MCD_EXPORT const char* mcd_category_name(const mcd_category* c);
/* JSON report {"category", "fatal", "sets": [{"field", "index", "resolved",
 * "missing"}]}. `fatal` (nullable) is set to 1 if a defining set is empty. */
MCD_EXPORT mcd_status mcd_category_validate(const mcd_category* c,
                                            const mcd_embeddings* e,
                                            int lowercase_fallback,
                                            char** report_json, int* fatal);

/* ---- bias subspaces ------------------------------------------------------ */

typedef struct mcd_subspace_options {
  int double_center;
  int lowercase_fallback;
} mcd_subspace_options;

/* PCA subspace of the category's defining sets on a normalized set.
 * `rank_deficient` (nullable) is set to 1 if fewer than k components exist;
 * the subspace then holds the achievable number. `options` may be NULL. */
MCD_EXPORT mcd_status mcd_subspace_build(const mcd_category* c,
                                         const mcd_embeddings* e, size_t k,
                                         const mcd_subspace_options* options,
                                         mcd_subspace** out,
                                         int* rank_deficient);
/* Principal components of an arbitrary m x d row-major matrix. */
MCD_EXPORT mcd_status mcd_principal_components(const double* rows, size_t m,
                                               size_t d, size_t k,
                                               int double_center,
                                               mcd_subspace** out,
                                               int* rank_deficient);
MCD_EXPORT mcd_status mcd_subspace_create(const char* label, size_t k,
                                          size_t dim, const double* components,
                                          mcd_subspace** out);
MCD_EXPORT mcd_status mcd_subspace_load(const char* path, mcd_subspace** out);
MCD_EXPORT mcd_status mcd_subspace_save(const mcd_subspace* s,
                                        const char* path);
MCD_EXPORT void mcd_subspace_free(mcd_subspace* s);
MCD_EXPORT const char* mcd_subspace_label(const mcd_subspace* s);
MCD_EXPORT size_t mcd_subspace_k(const mcd_subspace* s);
MCD_EXPORT size_t mcd_subspace_dim(const mcd_subspace* s);
MCD_EXPORT int mcd_subspace_is_orthonormal(const mcd_subspace* s);
MCD_EXPORT mcd_status mcd_subspace_component(const mcd_subspace* s, size_t j,
                                             double* out, size_t dim);
/* Fails with MCD_ERR_INVALID_ARGUMENT when the variances are unknown (e.g. a
 * subspace read from a file). */
MCD_EXPORT mcd_status mcd_subspace_explained_variance(const mcd_subspace* s,
                                                      double* out, size_t k);

/* ---- composition --------------------------------------------------------- */

typedef struct mcd_composition_info {
  double objective;      /* JoSEC only, NaN otherwise */
  int degenerate_tie;    /* JoSEC only */
} mcd_composition_info;

/* strategy must be SUM, MEAN or JOSEC. `distances` (nullable) receives n
 * per-subspace distances for JoSEC. `info` is nullable. */
MCD_EXPORT mcd_status mcd_compose(mcd_strategy strategy,
                                  const mcd_subspace* const* subspaces,
                                  size_t n, mcd_subspace** out,
                                  mcd_composition_info* info,
                                  double* distances);
MCD_EXPORT mcd_status mcd_distance_to_subspace(const double* u, size_t dim,
                                               const mcd_subspace* s,
                                               double* out);
MCD_EXPORT mcd_status mcd_josec_objective(const double* u, size_t dim,
                                          const mcd_subspace* const* subspaces,
                                          size_t n, double* out);
MCD_EXPORT mcd_status mcd_direction_subspace_cosine(const double* u,
                                                    size_t dim,
                                                    const mcd_subspace* s,
                                                    double* out);

typedef struct mcd_hypothesis_options {
  size_t k;
  uint64_t seed;
  size_t random_vectors;
  int double_center;
  int lowercase_fallback;
} mcd_hypothesis_options;

/* JSON report with "individual", "random_cosines", "random_mean",
 * "random_mean_abs", "josec_cosine", "josec_objective", "projection" and
 * "warnings". */
MCD_EXPORT mcd_status mcd_validate_hypothesis(
    const mcd_category* const* categories, size_t n,
    const mcd_category* ground_truth, const mcd_embeddings* e,
    const mcd_hypothesis_options* options, char** report_json);

/* ---- debiasing ----------------------------------------------------------- */

MCD_EXPORT mcd_status mcd_bias_component(const double* w, size_t dim,
                                         const mcd_subspace* s, double* out);
MCD_EXPORT mcd_status mcd_neutralize(const double* w, size_t dim,
                                     const mcd_subspace* s, double* out);
/* `members` is an n x dim row-major matrix; results go to `out` (same shape). */
MCD_EXPORT mcd_status mcd_equalize(const double* members, size_t n, size_t dim,
                                   const mcd_subspace* s, double* out);

typedef struct mcd_debias_options {
  mcd_strategy strategy;
  size_t k;
  const char* const* order; /* sequential only; NULL for spec order */
  size_t order_len;
  const char* const* neutral_words; /* NULL for the default neutral set */
  size_t neutral_len;
  int frozen_subspaces;
  int double_center;
  int lowercase_fallback;
} mcd_debias_options;

/* Debiases a normalized set. `report_json` (nullable) receives
 * {"strategy", "steps": [{"label", "k", "neutralized", "equalized",
 * "objective"?, "degenerate_tie"}], "warnings", "fully_contained",
 * "degenerate_sets", "rank_deficient"}. */
MCD_EXPORT mcd_status mcd_debias(const mcd_embeddings* e,
                                 const mcd_category* const* categories,
                                 size_t n, const mcd_debias_options* options,
                                 mcd_embeddings** out, char** report_json);

/* ---- evaluation ---------------------------------------------------------- */

/* MAC of explicit vectors: `targets` is n_targets x dim; attribute sets are
 * stored back to back in `attributes` with set j holding set_sizes[j] rows.
 * `table` (nullable) receives the n_targets x n_sets distance table. */
MCD_EXPORT mcd_status mcd_mac(const double* targets, size_t n_targets,
                              const double* attributes,
                              const size_t* set_sizes, size_t n_sets,
                              size_t dim, double* mac, double* table);
/* JSON {"category", "mac", "targets", "attribute_sets", "table",
 * "warnings"}. */
MCD_EXPORT mcd_status mcd_mac_category(const mcd_category* c,
                                       const mcd_embeddings* e,
                                       int lowercase_fallback,
                                       char** report_json, double* mac);

typedef struct mcd_t_test {
  double t;
  double p;
  size_t df;
  int zero_variance;
} mcd_t_test;

MCD_EXPORT mcd_status mcd_paired_t_test(const double* before,
                                        const double* after, size_t n,
                                        mcd_t_test* out);

typedef struct mcd_group_outcome {
  const char* label;
  uint64_t tp;
  uint64_t fp;
  uint64_t tn;
  uint64_t fn;
} mcd_group_outcome;

/* `skipped` (nullable) receives the number of undefined group rates left out. */
MCD_EXPORT mcd_status mcd_equality_differences(const mcd_group_outcome* groups,
                                               size_t n,
                                               const mcd_group_outcome* overall,
                                               double* fped, double* fned,
                                               size_t* skipped);

#ifdef __cplusplus
}
#endif

#endif  // MCDEBIAS_MCDEBIAS_H_
