#ifndef SMLC_H
#define SMLC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmlcStatus {
  SMLC_STATUS_OK = 0,
  SMLC_STATUS_NULL_POINTER = 1,
  SMLC_STATUS_INVALID_UTF8 = 2,
  // Malformed or unreadable data, model JSON, or query.
  SMLC_STATUS_INPUT_ERROR = 3,
  // Rejected classifier, prior, or search settings.
  SMLC_STATUS_CONFIG_ERROR = 4,
  SMLC_STATUS_BUFFER_TOO_SMALL = 5,
  SMLC_STATUS_PANIC = 6,
} SmlcStatus;

typedef enum SmlcPriorMode {
  // Every cell gets the same pseudo-count.
  SMLC_PRIOR_MODE_UNIFORM_CELL = 0,
  // A total prior strength spread evenly over all cells.
  SMLC_PRIOR_MODE_EQUIVALENT_SAMPLE_SIZE = 1,
} SmlcPriorMode;

// An encoded dataset and the encoder that produced it.
typedef struct SmlcDataset SmlcDataset;

// A trained classifier together with its schema and encoder.
typedef struct SmlcModel SmlcModel;

// Settings for partition search; used by `pm` and `anb` only.
typedef struct SmlcSearchOptions {
  uint64_t seed;
  uint32_t restarts;
  uint32_t patience;
  // 0 means unbounded.
  uint32_t max_block_size;
} SmlcSearchOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or `""`. The pointer
// stays valid until the next `smlc_*` call on the same thread.
const char *smlc_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *smlc_version(void);

struct SmlcSearchOptions smlc_search_options_default(void);

// Loads a CSV file with a header row. Numeric columns are discretized into
// `bins` equal-frequency bins over all rows.
//
// # Safety
// `path` and `class_column` must be NUL-terminated strings; `out` must be
// valid for one write.
enum SmlcStatus smlc_dataset_from_csv(const char *path,
                                      const char *class_column,
                                      uint32_t bins,
                                      struct SmlcDataset **out);

// Builds a dataset from pre-encoded values. `rows` is row-major,
// `n_rows × n_predictors`; predictor `i` takes values `0..arities[i]` and
// labels take `0..class_arity`. Columns are named `X1..Xn` and `Y`.
//
// # Safety
// `rows` must be valid for `n_rows * n_predictors` reads, `arities` for
// `n_predictors`, `labels` for `n_rows`; `out` for one write.
enum SmlcStatus smlc_dataset_from_codes(const uint32_t *rows,
                                        size_t n_rows,
                                        size_t n_predictors,
                                        const uint32_t *arities,
                                        const uint32_t *labels,
                                        uint32_t class_arity,
                                        struct SmlcDataset **out);

// # Safety
// `dataset` must be null or a live handle; it is invalid afterwards.
void smlc_dataset_free(struct SmlcDataset *dataset);

// # Safety
// `dataset` must be null or a live handle. Null gives 0.
size_t smlc_dataset_n_rows(const struct SmlcDataset *dataset);

// # Safety
// `dataset` must be null or a live handle. Null gives 0.
size_t smlc_dataset_n_predictors(const struct SmlcDataset *dataset);

// # Safety
// `dataset` must be null or a live handle. Null gives 0.
uint32_t smlc_dataset_class_arity(const struct SmlcDataset *dataset);

// Copies the encoded predictors of row `index` into `out`, which holds
// `out_len` values.
//
// # Safety
// `dataset` must be a live handle; `out` valid for `out_len` writes and
// `label` for one write (or null).
enum SmlcStatus smlc_dataset_row(const struct SmlcDataset *dataset,
                                 size_t index,
                                 uint32_t *out,
                                 size_t out_len,
                                 uint32_t *label);

// Trains `classifier` (`nb`, `om<i>`, `pm`, or `anb`) on every row of
// `dataset`. `prior` is `uniform:<alpha>` or `bdeu:<ess>`; null means
// `uniform:1`. Null `search` uses [`smlc_search_options_default`].
//
// # Safety
// `dataset` must be a live handle; `classifier` and non-null `prior` must
// be NUL-terminated; `search` null or valid; `out` valid for one write.
enum SmlcStatus smlc_model_train(const struct SmlcDataset *dataset,
                                 const char *classifier,
                                 const char *prior,
                                 const struct SmlcSearchOptions *search,
                                 struct SmlcModel **out);

// # Safety
// `model` must be null or a live handle; it is invalid afterwards.
void smlc_model_free(struct SmlcModel *model);

// # Safety
// `model` must be null or a live handle. Null gives 0.
uint32_t smlc_model_class_arity(const struct SmlcModel *model);

// # Safety
// `model` must be null or a live handle. Null gives 0.
size_t smlc_model_n_predictors(const struct SmlcModel *model);

// Writes the class distribution for the encoded query `x` (`n` values)
// into `out`, which holds `out_len` doubles. Values outside a predictor's
// training range count as unseen.
//
// # Safety
// `model` must be a live handle; `x` valid for `n` reads; `out` for
// `out_len` writes.
enum SmlcStatus smlc_model_predict(const struct SmlcModel *model,
                                   const uint32_t *x,
                                   size_t n,
                                   double *out,
                                   size_t out_len);

// Serializes the model in the same JSON format the `smlc` command line
// reads. Release the string with [`smlc_string_free`].
//
// # Safety
// `model` must be a live handle; `out` valid for one write.
enum SmlcStatus smlc_model_to_json(const struct SmlcModel *model, char **out);

// Loads a model from JSON written by [`smlc_model_to_json`] or by
// `smlc train`.
//
// # Safety
// `json` must be NUL-terminated; `out` valid for one write.
enum SmlcStatus smlc_model_from_json(const char *json, struct SmlcModel **out);

// # Safety
// `s` must be null or a string returned by this library.
void smlc_string_free(char *s);

// Log supervised marginal likelihood of a count table. `counts` is
// row-major `n_configs × class_arity`, one row per observed predictor
// configuration. `arities` (`n_arities` values) describe the full
// configuration space, which sets the per-cell prior under
// `EquivalentSampleSize`. `prior_mode` is an [`SmlcPriorMode`] value.
//
// # Safety
// `counts` must be valid for `n_configs * class_arity` reads, `arities`
// for `n_arities`, and `out` for one write.
enum SmlcStatus smlc_log_sml(const uint64_t *counts,
                             size_t n_configs,
                             uint32_t class_arity,
                             const uint32_t *arities,
                             size_t n_arities,
                             uint32_t prior_mode,
                             double prior_param,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMLC_H */
