/*
 * idprof: intrinsic-dimension profiling of point clouds and network layers.
 *
 * C interface to the shared library. Objects are opaque handles created by
 * `*_create` / `*_load` / `*_compute` calls and released with the matching
 * `*_free`. Every fallible call returns an idprof_status; on failure the
 * message of the most recent error on the calling thread is available from
 * idprof_last_error(). Strings handed out through `char**` parameters are
 * heap-allocated and must be released with idprof_string_free().
 */
#ifndef IDPROF_H
#define IDPROF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IDPROF_BUILDING)
#    define IDPROF_API __declspec(dllexport)
#  else
#    define IDPROF_API __declspec(dllimport)
#  endif
#else
#  define IDPROF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idprof_status {
    IDPROF_OK = 0,
    IDPROF_ERR_INVALID_ARGUMENT = 1,
    IDPROF_ERR_IO = 2,
    IDPROF_ERR_FORMAT = 3,
    IDPROF_ERR_NON_FINITE = 4,
    IDPROF_ERR_DUPLICATE_POINTS = 5,
    IDPROF_ERR_K_TOO_LARGE = 6,
    IDPROF_ERR_DEGENERATE_ROW = 7,
    IDPROF_ERR_EMPTY_INPUT = 8,
    IDPROF_ERR_SCHEMA = 9,
    IDPROF_ERR_MISSING_DUMP = 10,
    IDPROF_ERR_ROW_COUNT_MISMATCH = 11,
    IDPROF_ERR_EMPTY_RECORD = 12,
    IDPROF_ERR_ZERO_VARIANCE = 13,
    IDPROF_ERR_LENGTH_MISMATCH = 14,
    IDPROF_ERR_TOO_FEW_DATASETS = 15,
    IDPROF_ERR_EMPTY_GROUP = 16,
    IDPROF_ERR_SPEC_INVALID = 17,
    IDPROF_ERR_INTERNAL = 100
} idprof_status;

/* Stable machine-readable name, e.g. "DuplicatePoints", "KTooLarge". */
IDPROF_API const char* idprof_status_name(idprof_status status);

/* Message of the last failure on this thread ("" if none). Valid until the
 * next idprof call on the same thread. */
IDPROF_API const char* idprof_last_error(void);

IDPROF_API const char* idprof_version(void);

IDPROF_API void idprof_string_free(char* s);

/* ---- estimator configuration ------------------------------------------ */

typedef enum idprof_aggregation {
    IDPROF_AGG_MACKAY = 0, /* inverse of mean inverse local estimate */
    IDPROF_AGG_LEVINA = 1  /* arithmetic mean of local estimates */
} idprof_aggregation;

typedef struct idprof_estimator_config {
    uint32_t k;
    idprof_aggregation aggregation;
    int use_subsample;
    uint64_t subsample_m;
    uint64_t subsample_seed;
    int use_bootstrap;
    uint64_t bootstrap_rounds;
    uint64_t bootstrap_seed;
    int use_jitter;
    double jitter_epsilon;
    uint64_t jitter_seed;
    uint32_t threads; /* 0 = hardware concurrency; never changes results */
} idprof_estimator_config;

/* k = 20, mackay, no subsample / bootstrap / jitter, threads = 0. */
IDPROF_API void idprof_estimator_config_init(idprof_estimator_config* config);

typedef struct idprof_estimate {
    double value;
    uint64_t n_used;
    int has_spread;
    double spread;
} idprof_estimate;

/* ---- point clouds ------------------------------------------------------ */

typedef struct idprof_cloud idprof_cloud;

/* Copies `rows * cols` row-major values. */
IDPROF_API idprof_status idprof_cloud_create(const double* data, uint64_t rows, uint64_t cols,
                                             idprof_cloud** out);
/* NPY 1.0, little-endian float32/float64, C order, 2-D. */
IDPROF_API idprof_status idprof_cloud_load_npy(const char* path, idprof_cloud** out);
IDPROF_API idprof_status idprof_cloud_save_npy(const idprof_cloud* cloud, const char* path,
                                               int single_precision);
IDPROF_API uint64_t idprof_cloud_rows(const idprof_cloud* cloud);
IDPROF_API uint64_t idprof_cloud_cols(const idprof_cloud* cloud);
/* Copies the values (as double) into `out`, which holds `capacity` values. */
IDPROF_API idprof_status idprof_cloud_copy(const idprof_cloud* cloud, double* out, uint64_t capacity);
IDPROF_API void idprof_cloud_free(idprof_cloud* cloud);

/* ---- neighbours and the estimator ------------------------------------- */

/* Writes rows * k sorted neighbour distances into `out` (capacity values). */
IDPROF_API idprof_status idprof_knn_distances(const idprof_cloud* cloud, uint32_t k, uint32_t threads,
                                              double* out, uint64_t capacity);

IDPROF_API idprof_status idprof_local_mle(const double* row, uint64_t length, uint32_t k, double* out);
IDPROF_API idprof_status idprof_aggregate(const double* locals, uint64_t count, idprof_aggregation mode,
                                          double* out);
IDPROF_API idprof_status idprof_estimate_id(const idprof_cloud* cloud, const idprof_estimator_config* config,
                                            idprof_estimate* out);

/* Estimate report JSON. `dataset_id` and `domain` ("natural"/"medical") may be
 * NULL; when both are given the document doubles as a d_data record. */
IDPROF_API idprof_status idprof_estimate_render_json(const idprof_estimate* estimate,
                                                     const idprof_estimator_config* config,
                                                     const char* source, const char* dataset_id,
                                                     const char* domain, char** out_json);

/* ---- layer profiles ---------------------------------------------------- */

typedef struct idprof_manifest idprof_manifest;
typedef struct idprof_curve idprof_curve;

typedef struct idprof_peak {
    uint64_t i_star;
    double d_max;
    double rel_depth;
} idprof_peak;

typedef struct idprof_curve_point {
    uint64_t index;
    double relative_depth;
    int has_value; /* 0 when the layer failed and is excluded from the peak */
    double value;
} idprof_curve_point;

typedef enum idprof_format { IDPROF_FORMAT_JSON = 0, IDPROF_FORMAT_CSV = 1, IDPROF_FORMAT_SVG = 2 } idprof_format;

IDPROF_API idprof_status idprof_manifest_load(const char* path, idprof_manifest** out);
IDPROF_API uint64_t idprof_manifest_layer_count(const idprof_manifest* manifest);
IDPROF_API uint64_t idprof_manifest_rows(const idprof_manifest* manifest);
IDPROF_API void idprof_manifest_free(idprof_manifest* manifest);

IDPROF_API idprof_status idprof_curve_compute(const idprof_manifest* manifest,
                                              const idprof_estimator_config* config, idprof_curve** out);
IDPROF_API uint64_t idprof_curve_size(const idprof_curve* curve);
IDPROF_API idprof_status idprof_curve_point_at(const idprof_curve* curve, uint64_t position,
                                               idprof_curve_point* out);
IDPROF_API idprof_status idprof_curve_peak(const idprof_curve* curve, idprof_peak* out);
/* JSON: profile document with curve and peak; CSV: one row per layer; SVG: ID vs depth. */
IDPROF_API idprof_status idprof_curve_render(const idprof_curve* curve, idprof_format format, char** out);
IDPROF_API void idprof_curve_free(idprof_curve* curve);

/* Earliest argmax of `values` (layer i = position + 1, L = count). */
IDPROF_API idprof_status idprof_find_peak(const double* values, uint64_t count, idprof_peak* out);

/* ---- cross-dataset analysis ------------------------------------------- */

typedef struct idprof_records idprof_records;
typedef struct idprof_correlation idprof_correlation;
typedef struct idprof_sweep idprof_sweep;

typedef struct idprof_correlation_summary {
    uint64_t n_points;
    double r;
    double slope;
    double intercept;
    int has_pooled;
    uint64_t pooled_n_points;
    double pooled_r;
    double pooled_slope;
    double pooled_intercept;
} idprof_correlation_summary;

IDPROF_API idprof_status idprof_records_load_dir(const char* dir, idprof_records** out);
IDPROF_API uint64_t idprof_records_count(const idprof_records* records);
/* Per-dataset and per-domain peak statistics; JSON or CSV. */
IDPROF_API idprof_status idprof_records_render_peaks(const idprof_records* records, idprof_format format,
                                                     char** out);
IDPROF_API void idprof_records_free(idprof_records* records);

IDPROF_API idprof_status idprof_correlate(const idprof_records* records, idprof_correlation** out);
IDPROF_API idprof_status idprof_correlation_summary_get(const idprof_correlation* corr,
                                                        idprof_correlation_summary* out);
IDPROF_API idprof_status idprof_correlation_render(const idprof_correlation* corr, idprof_format format,
                                                   char** out);
IDPROF_API void idprof_correlation_free(idprof_correlation* corr);

IDPROF_API idprof_status idprof_sweep_load_root(const char* root, idprof_sweep** out);
IDPROF_API uint64_t idprof_sweep_row_count(const idprof_sweep* sweep);
/* JSON or CSV. */
IDPROF_API idprof_status idprof_sweep_render(const idprof_sweep* sweep, idprof_format format, char** out);
IDPROF_API void idprof_sweep_free(idprof_sweep* sweep);

IDPROF_API idprof_status idprof_pearson_r(const double* xs, const double* ys, uint64_t count, double* out);
IDPROF_API idprof_status idprof_linear_fit(const double* xs, const double* ys, uint64_t count, double* slope,
                                           double* intercept);

/* ---- synthetic manifolds ---------------------------------------------- */

typedef enum idprof_manifold_kind {
    IDPROF_MANIFOLD_HYPERCUBE = 0,
    IDPROF_MANIFOLD_HYPERSPHERE = 1,
    IDPROF_MANIFOLD_SWISS_ROLL = 2
} idprof_manifold_kind;

typedef struct idprof_manifold_spec {
    idprof_manifold_kind kind;
    uint64_t intrinsic_dim;
    uint64_t ambient_dim;
    uint64_t n_points;
    double noise_sigma;
    uint64_t seed;
} idprof_manifold_spec;

IDPROF_API idprof_status idprof_synth_generate(const idprof_manifold_spec* spec, idprof_cloud** out);

/* Runs a synth spec document (JSON text) and writes its outputs under
 * `out_dir`. Returns a JSON summary listing the files written. */
IDPROF_API idprof_status idprof_synth_run(const char* spec_json, const char* out_dir, char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* IDPROF_H */
