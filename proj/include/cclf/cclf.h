/*
 * cclf: binary code-comment-sentence classifiers.
 *
 * C interface to the core library. Objects are opaque handles created by a
 * *_create / *_open / *_load call and released with the matching *_free.
 * Every fallible call returns a cclf_status; on failure a description is
 * available from cclf_last_error() on the same thread until the next call.
 *
 * Categories are named "<Language>/<Name>", e.g. "Java/Ownership".
 */
#ifndef CCLF_CCLF_H
#define CCLF_CCLF_H

#include <stddef.h>
#include <stdint.h>

#if defined(CCLF_BUILDING_LIBRARY)
#define CCLF_API __attribute__((visibility("default")))
#else
#define CCLF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cclf_status {
  CCLF_OK = 0,
  CCLF_ERR_INVALID_ARGUMENT = 1,
  CCLF_ERR_IO = 2,
  CCLF_ERR_MISSING_COLUMN = 10,
  CCLF_ERR_BAD_LABEL = 11,
  CCLF_ERR_EMPTY_FILE = 12,
  CCLF_ERR_UNKNOWN_CATEGORY = 13,
  CCLF_ERR_BAD_PARTITION = 14,
  CCLF_ERR_MALFORMED_CSV = 15,
  CCLF_ERR_SINGLE_CLASS_INPUT = 20,
  CCLF_ERR_BACKEND_UNAVAILABLE = 30,
  CCLF_ERR_NON_FINITE_LOSS = 31,
  CCLF_ERR_DIMENSION_MISMATCH = 32,
  CCLF_ERR_SINGLE_CLASS_LABELS = 40,
  CCLF_ERR_NON_FINITE_OBJECTIVE = 41,
  CCLF_ERR_LENGTH_MISMATCH = 50,
  CCLF_ERR_MISSING_CATEGORY = 51,
  CCLF_ERR_CATEGORY_MISMATCH = 52,
  CCLF_ERR_INSUFFICIENT_SAMPLES = 60,
  CCLF_ERR_BOUNDS = 61,
  CCLF_ERR_VARIANT_MISMATCH = 62,
  CCLF_ERR_BAD_ARTIFACT = 63,
  CCLF_ERR_BUFFER_TOO_SMALL = 70,
  CCLF_ERR_INTERNAL = 99
} cclf_status;

typedef enum cclf_variant {
  CCLF_VARIANT_WITH_CLASSNAME = 0,
  CCLF_VARIANT_SENTENCE_ONLY = 1
} cclf_variant;

typedef enum cclf_solver {
  CCLF_SOLVER_NEWTON_CG = 0,
  CCLF_SOLVER_LBFGS = 1,
  CCLF_SOLVER_LIBLINEAR = 2
} cclf_solver;

typedef struct cclf_corpus cclf_corpus;
typedef struct cclf_backend cclf_backend;
typedef struct cclf_artifact cclf_artifact;
typedef struct cclf_report cclf_report;

typedef struct cclf_counts {
  int64_t train_pos, train_neg, test_pos, test_neg;
} cclf_counts;

typedef struct cclf_confusion {
  int64_t tp, fp, tn, fn;
} cclf_confusion;

/* accuracy is NaN when unknown. */
typedef struct cclf_metrics {
  double precision, recall, f1, weighted_f1, accuracy;
} cclf_metrics;

typedef struct cclf_hyperparams {
  double learning_rate;
  int32_t epochs;
  int32_t head_max_iterations;
  int32_t solver; /* cclf_solver */
} cclf_hyperparams;

typedef struct cclf_train_options {
  int32_t variant; /* cclf_variant */
  uint64_t seed;
  int32_t pair_iterations;
  int32_t batch_size;
  double l2_strength;    /* <= 0 selects the C = 1 default (1 / n) */
  double head_tolerance;
} cclf_train_options;

typedef struct cclf_discrepancy {
  int32_t unknown_category; /* 1: category absent from the reference table */
  char category[64];
  char field[16];           /* train_pos, train_neg, test_pos, test_neg */
  int64_t expected, actual;
} cclf_discrepancy;

typedef struct cclf_trial {
  int32_t index;
  cclf_hyperparams hyperparams;
  double objective_f1;
  double wall_seconds;
} cclf_trial;

typedef struct cclf_benchmark_row {
  char backend_id[64];
  double accuracy, f1, wall_seconds;
} cclf_benchmark_row;

typedef struct cclf_ablation {
  double precision, recall, f1;
} cclf_ablation;

/* ---- library ------------------------------------------------------------ */

CCLF_API const char* cclf_version(void);
CCLF_API const char* cclf_last_error(void);
CCLF_API const char* cclf_status_name(cclf_status status);
CCLF_API void cclf_string_free(char* text);

/* Tuned defaults and trainer defaults. */
CCLF_API void cclf_default_hyperparams(cclf_hyperparams* out);
CCLF_API void cclf_base_hyperparams(cclf_hyperparams* out);
CCLF_API void cclf_default_train_options(cclf_train_options* out);

/* ---- corpus ------------------------------------------------------------- */

/* Loads <root>/<language>/<category>.csv files. `aliases` maps canonical
 * column names to file headers as "canonical=header,..."; NULL for none. */
CCLF_API cclf_status cclf_corpus_open(const char* root, const char* aliases, cclf_corpus** out);
/* Loads a single per-category file. */
CCLF_API cclf_status cclf_corpus_open_file(const char* path, const char* category, const char* aliases,
                                           cclf_corpus** out);
CCLF_API void cclf_corpus_free(cclf_corpus* corpus);
CCLF_API size_t cclf_corpus_size(const cclf_corpus* corpus);
CCLF_API cclf_status cclf_corpus_category(const cclf_corpus* corpus, size_t index, char* buf, size_t len);
CCLF_API cclf_status cclf_corpus_find(const cclf_corpus* corpus, const char* category, size_t* index);
CCLF_API cclf_status cclf_corpus_counts(const cclf_corpus* corpus, size_t index, cclf_counts* out);
CCLF_API size_t cclf_corpus_warning_count(const cclf_corpus* corpus, size_t index);
/* Writes up to `cap` records and sets *count to the total number found. */
CCLF_API cclf_status cclf_corpus_validate(const cclf_corpus* corpus, cclf_discrepancy* out, size_t cap,
                                          size_t* count);

/* ---- embedding backends ------------------------------------------------- */

/* Registered ids, newline separated; release with cclf_string_free. */
CCLF_API char* cclf_backend_ids(void);
CCLF_API cclf_status cclf_backend_create(const char* backend_id, size_t dimension, uint64_t seed,
                                         cclf_backend** out);
CCLF_API void cclf_backend_free(cclf_backend* backend);
CCLF_API size_t cclf_backend_dimension(const cclf_backend* backend);
CCLF_API cclf_status cclf_backend_encode(const cclf_backend* backend, const char* text, double* out, size_t len);

/* ---- training and inference -------------------------------------------- */

CCLF_API cclf_status cclf_train(const cclf_corpus* corpus, size_t index, const cclf_backend* backend,
                                const cclf_hyperparams* hp, const cclf_train_options* options,
                                cclf_artifact** out);
/* Trains `n` categories concurrently; out receives n handles. */
CCLF_API cclf_status cclf_train_many(const cclf_corpus* corpus, const size_t* indices, size_t n,
                                     const cclf_backend* backend, const cclf_hyperparams* hp,
                                     const cclf_train_options* options, int32_t max_parallel,
                                     cclf_artifact** out);
CCLF_API cclf_status cclf_artifact_save(const cclf_artifact* artifact, const char* dir);
CCLF_API cclf_status cclf_artifact_load(const char* dir, cclf_artifact** out);
CCLF_API void cclf_artifact_free(cclf_artifact* artifact);
CCLF_API cclf_status cclf_artifact_category(const cclf_artifact* artifact, char* buf, size_t len);
CCLF_API int32_t cclf_artifact_variant(const cclf_artifact* artifact);
CCLF_API void cclf_artifact_hyperparams(const cclf_artifact* artifact, cclf_hyperparams* out);
CCLF_API size_t cclf_artifact_pair_count(const cclf_artifact* artifact);
/* classname may be NULL only for sentence_only artifacts. */
CCLF_API cclf_status cclf_classify(const cclf_artifact* artifact, const char* sentence, const char* classname,
                                   int32_t* label, double* probability);
CCLF_API cclf_status cclf_evaluate(const cclf_artifact* artifact, const cclf_corpus* corpus, size_t index,
                                   cclf_confusion* counts, cclf_metrics* metrics);

/* ---- search and benchmark ---------------------------------------------- */

/* history receives min(trials, history_cap) records. use_test_split != 0
 * scores on the test partition instead of a held-out slice of train. */
CCLF_API cclf_status cclf_tune(const cclf_corpus* corpus, size_t index, const cclf_backend* backend,
                               int32_t trials, uint64_t seed, int32_t use_test_split,
                               const cclf_train_options* options, cclf_hyperparams* best,
                               cclf_trial* history, size_t history_cap);
CCLF_API cclf_status cclf_benchmark(const cclf_corpus* corpus, size_t index,
                                    const cclf_backend* const* backends, size_t n_backends,
                                    int32_t n_per_class, int32_t epochs, uint64_t seed,
                                    const cclf_train_options* options, cclf_benchmark_row* rows);

/* ---- metrics and reports ----------------------------------------------- */

CCLF_API cclf_status cclf_confusion_from(const int32_t* predictions, const int32_t* labels, size_t n,
                                         cclf_confusion* out);
CCLF_API cclf_status cclf_metrics_from(const cclf_confusion* counts, cclf_metrics* out);

CCLF_API cclf_status cclf_report_create(cclf_report** out);
/* Reads per-category rows (language,category,precision,recall,f1,...). */
CCLF_API cclf_status cclf_report_load_csv(const char* path, cclf_report** out);
CCLF_API void cclf_report_free(cclf_report* report);
CCLF_API cclf_status cclf_report_add_counts(cclf_report* report, const char* category, const cclf_confusion* counts);
CCLF_API cclf_status cclf_report_add_metrics(cclf_report* report, const char* category, const cclf_metrics* metrics);
/* File with columns label,prediction. */
CCLF_API cclf_status cclf_report_add_predictions(cclf_report* report, const char* category, const char* path);
CCLF_API size_t cclf_report_size(const cclf_report* report);
CCLF_API cclf_status cclf_report_averages(const cclf_report* report, cclf_metrics* out);
/* CCLF_ERR_MISSING_CATEGORY unless all 19 categories are present. */
CCLF_API cclf_status cclf_report_score(const cclf_report* report, double* score, double* outperformed_fraction);
CCLF_API cclf_status cclf_report_write_csv(const cclf_report* report, const char* path);
CCLF_API cclf_status cclf_report_write_summary(const cclf_report* report, const char* path);
CCLF_API cclf_status cclf_report_write_svg(const cclf_report* report, const char* path);
/* Aligned text table; release with cclf_string_free. */
CCLF_API char* cclf_report_table(const cclf_report* report);
CCLF_API cclf_status cclf_ablation_delta(const cclf_report* with_classname, const cclf_report* sentence_only,
                                         cclf_ablation* out);

#ifdef __cplusplus
}
#endif

#endif /* CCLF_CCLF_H */
