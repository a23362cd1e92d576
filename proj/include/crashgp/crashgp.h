/*
 * C interface to the crashgp surrogate toolkit.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a cgp_status; on
 * failure cgp_last_error() describes the problem for the calling thread.
 */
#ifndef CRASHGP_H
#define CRASHGP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CRASHGP_BUILDING)
#    define CGP_API __declspec(dllexport)
#  else
#    define CGP_API __declspec(dllimport)
#  endif
#else
#  define CGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cgp_status {
  CGP_OK = 0,
  CGP_ERR_INVALID_ARGUMENT = 1,
  CGP_ERR_PARAMETER_DOMAIN = 2,
  CGP_ERR_DATA = 3,
  CGP_ERR_PARSE = 4,
  CGP_ERR_RANGE = 5,
  CGP_ERR_CONFLICT = 6,
  CGP_ERR_CONFIG = 7,
  CGP_ERR_NUMERICAL = 8,
  CGP_ERR_FIT = 9,
  CGP_ERR_STATE = 10,
  CGP_ERR_REQUEST = 11,
  CGP_ERR_UNDEFINED_REFERENCE = 12,
  CGP_ERR_IO = 13,
  CGP_ERR_INTERNAL = 99
} cgp_status;

typedef enum cgp_metric { CGP_METRIC_HIC15 = 0, CGP_METRIC_A_T1_MAX = 1 } cgp_metric;

typedef enum cgp_smoothness {
  CGP_MATERN_1_2 = 1,
  CGP_MATERN_3_2 = 3,
  CGP_MATERN_5_2 = 5
} cgp_smoothness;

typedef enum cgp_candidate_source {
  CGP_CANDIDATES_GRID_MIDPOINTS = 0,
  CGP_CANDIDATES_LHS_POOL = 1,
  CGP_CANDIDATES_FILE = 2
} cgp_candidate_source;

typedef struct cgp_box {
  double torso_lo, torso_hi;
  double dring_lo, dring_hi;
} cgp_box;

typedef struct cgp_point {
  double torso_angle_deg;
  double dring_z;
} cgp_point;

typedef struct cgp_run {
  int case_id;
  cgp_point input;
  double hic15;
  double a_t1_max;
} cgp_run;

typedef struct cgp_fit_config {
  cgp_smoothness smoothness;
  unsigned restarts;
  uint64_t seed;
  double lengthscale_lo, lengthscale_hi;
  double signal_variance_lo, signal_variance_hi;
  double noise_variance_lo, noise_variance_hi;
  int center_outputs;
} cgp_fit_config;

typedef struct cgp_model_info {
  cgp_metric metric;
  size_t training_size;
  int max_case_id;
  cgp_smoothness smoothness;
  double signal_variance;
  double lengthscales[2];
  double noise_variance;
  double output_offset;
  double output_scale;
  double jitter;
  double log_marginal_likelihood;
  double max_in_sample_error_pct;
  cgp_box box;
} cgp_model_info;

typedef struct cgp_candidate_config {
  cgp_candidate_source source;
  unsigned grid_levels;   /* grid midpoints: lattice levels per dimension */
  size_t pool_size;       /* LHS pool */
  uint64_t pool_seed;     /* LHS pool */
  const char* path;       /* file: pending-manifest format */
} cgp_candidate_config;

typedef struct cgp_accuracy_entry {
  int case_id;
  cgp_point point;
  double predicted;
  double observed;
  double rel_error_pct;
  int outside_box;
} cgp_accuracy_entry;

typedef struct cgp_accuracy_summary {
  cgp_metric metric;
  size_t entries;
  size_t training_size;
  double worst_error_pct;
  double threshold_pct;
  int passed;
} cgp_accuracy_summary;

#define CGP_MAX_PERCENTILES 16

typedef struct cgp_stats_config {
  size_t n_samples;
  uint64_t lhs_seed;
  size_t n_percentiles;
  double percentiles[CGP_MAX_PERCENTILES];
  size_t histogram_bins;
  size_t mode_bins;
  int posterior_sampling;
  uint64_t sampling_seed;
} cgp_stats_config;

typedef struct cgp_summary {
  cgp_metric metric;
  size_t n_samples;
  double mean, std, mode, min, max;
  size_t n_var;
  double var_percentiles[CGP_MAX_PERCENTILES];
  double var_values[CGP_MAX_PERCENTILES];
} cgp_summary;

typedef struct cgp_loop_options {
  size_t k;
  double threshold_pct;
  unsigned max_rounds;
  int augment_all;
} cgp_loop_options;

typedef struct cgp_loop_summary {
  unsigned rounds;
  int passed;
  int suspended;
  size_t reports;
  size_t pending;
} cgp_loop_summary;

typedef struct cgp_ledger cgp_ledger;
typedef struct cgp_model cgp_model;
typedef struct cgp_report cgp_report;
typedef struct cgp_distribution cgp_distribution;
typedef struct cgp_loop cgp_loop;

/* Returns non-zero and fills *out when a result for `query` is available. */
typedef int (*cgp_oracle_fn)(void* user, cgp_point query, int case_id, cgp_run* out);

CGP_API const char* cgp_version(void);
CGP_API const char* cgp_last_error(void);
CGP_API const char* cgp_status_name(cgp_status status);
CGP_API const char* cgp_metric_name(cgp_metric metric);
CGP_API cgp_status cgp_metric_parse(const char* name, cgp_metric* out);

CGP_API void cgp_box_default(cgp_box* out);
CGP_API void cgp_fit_config_default(cgp_fit_config* out);
CGP_API void cgp_candidate_config_default(cgp_candidate_config* out);
CGP_API void cgp_stats_config_default(cgp_stats_config* out);
CGP_API void cgp_loop_options_default(cgp_loop_options* out);
CGP_API cgp_status cgp_normalize(const cgp_box* box, cgp_point p, double* u1, double* u2);

/* Ledgers */
CGP_API cgp_status cgp_ledger_load_fixture(cgp_ledger** out);
CGP_API cgp_status cgp_ledger_ingest(const char* path, const cgp_box* box, cgp_ledger** out);
CGP_API cgp_status cgp_ledger_from_runs(const cgp_run* runs, size_t n, const cgp_box* box,
                                        cgp_ledger** out);
CGP_API cgp_status cgp_ledger_select(const cgp_ledger* ledger, const int* case_ids, size_t n,
                                     cgp_ledger** out);
CGP_API cgp_status cgp_ledger_export(const cgp_ledger* ledger, const char* path);
CGP_API size_t cgp_ledger_size(const cgp_ledger* ledger);
CGP_API cgp_status cgp_ledger_run(const cgp_ledger* ledger, size_t index, cgp_run* out);
CGP_API cgp_status cgp_ledger_box(const cgp_ledger* ledger, cgp_box* out);
CGP_API void cgp_ledger_free(cgp_ledger* ledger);

/* Models */
CGP_API cgp_status cgp_model_fit(const cgp_ledger* ledger, cgp_metric metric,
                                 const cgp_fit_config* config, cgp_model** out);
CGP_API cgp_status cgp_model_load(const char* path, cgp_model** out);
CGP_API cgp_status cgp_model_save(const cgp_model* model, const char* path);
CGP_API cgp_status cgp_model_write_fit_report(const cgp_model* model, const char* path);
CGP_API cgp_status cgp_model_predict(const cgp_model* model, cgp_point query, double* mean,
                                     double* variance);
CGP_API cgp_status cgp_model_info_get(const cgp_model* model, cgp_model_info* out);
CGP_API cgp_status cgp_model_augment(const cgp_model* model, const cgp_ledger* runs,
                                     cgp_model** out);
CGP_API void cgp_model_free(cgp_model* model);

/* Adaptive refinement */
CGP_API cgp_status cgp_propose(const cgp_model* model, const cgp_candidate_config* candidates,
                               size_t k, cgp_point* out_points, size_t* out_count);
CGP_API cgp_status cgp_write_pending(const char* path, const cgp_point* points, size_t n,
                                     int first_case_id);
/* Runs from `results` matching the points of the pending manifest, in
   manifest order. CGP_ERR_REQUEST when a pending point has no result. */
CGP_API cgp_status cgp_ledger_match_pending(const cgp_ledger* results, const char* pending_path,
                                            cgp_ledger** out);
CGP_API cgp_status cgp_evaluate(const cgp_model* model, const cgp_ledger* test_runs,
                                double threshold_pct, cgp_report** out);
CGP_API cgp_status cgp_report_summary(const cgp_report* report, cgp_accuracy_summary* out);
CGP_API cgp_status cgp_report_entry(const cgp_report* report, size_t index,
                                    cgp_accuracy_entry* out);
CGP_API cgp_status cgp_report_write(const cgp_report* report, const char* path);
/* Console table; the pointer stays valid until the report is freed. */
CGP_API const char* cgp_report_table(const cgp_report* report);
CGP_API void cgp_report_free(cgp_report* report);

CGP_API cgp_status cgp_adaptive_loop(const cgp_model* initial, cgp_oracle_fn oracle, void* user,
                                     const cgp_candidate_config* candidates,
                                     const cgp_loop_options* options, cgp_loop** out);
/* Same loop with results looked up by input in a ledger. */
CGP_API cgp_status cgp_adaptive_loop_ledger(const cgp_model* initial, const cgp_ledger* oracle,
                                            const cgp_candidate_config* candidates,
                                            const cgp_loop_options* options, cgp_loop** out);
CGP_API cgp_status cgp_loop_summary_get(const cgp_loop* loop, cgp_loop_summary* out);
/* Borrowed pointers, valid until the loop is freed. */
CGP_API const cgp_model* cgp_loop_model(const cgp_loop* loop);
CGP_API const cgp_report* cgp_loop_report(const cgp_loop* loop, size_t index);
CGP_API cgp_status cgp_loop_write_pending(const cgp_loop* loop, const char* path);
CGP_API void cgp_loop_free(cgp_loop* loop);

/* Distributions */
CGP_API cgp_status cgp_distribution_compute(const cgp_model* model, const cgp_stats_config* config,
                                            cgp_distribution** out);
CGP_API cgp_status cgp_distribution_summary(const cgp_distribution* dist, cgp_summary* out);
CGP_API size_t cgp_distribution_size(const cgp_distribution* dist);
CGP_API const double* cgp_distribution_values(const cgp_distribution* dist);
CGP_API cgp_status cgp_distribution_write_histogram_csv(const cgp_distribution* dist,
                                                        const char* path);
CGP_API cgp_status cgp_distribution_write_svg(const cgp_distribution* dist, const char* path);
CGP_API cgp_status cgp_write_summary_document(const cgp_distribution* const* dists, size_t n,
                                              const char* path);
CGP_API void cgp_distribution_free(cgp_distribution* dist);

#ifdef __cplusplus
}
#endif

#endif /* CRASHGP_H */
