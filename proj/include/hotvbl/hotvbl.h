/*
 * hotvbl: piecewise smooth signal recovery by sparse Bayesian learning over
 * high order total variation synthesis operators.
 *
 * C interface. All objects are opaque handles created by the library and
 * released with the matching *_free function. Every fallible call returns a
 * hotvbl_status; on failure hotvbl_last_error() describes the problem for the
 * calling thread until its next failing call.
 *
 * Matrices cross the boundary as row-major double arrays.
 */
#ifndef HOTVBL_HOTVBL_H
#define HOTVBL_HOTVBL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HOTVBL_BUILDING)
#    define HOTVBL_API __declspec(dllexport)
#  else
#    define HOTVBL_API __declspec(dllimport)
#  endif
#else
#  define HOTVBL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hotvbl_status {
  HOTVBL_OK = 0,
  HOTVBL_ERR_DIMENSION = 1,
  HOTVBL_ERR_INVALID_ARGUMENT = 2,
  HOTVBL_ERR_NUMERICAL = 3,
  HOTVBL_ERR_INTERNAL = 4,
  HOTVBL_ERR_OUT_OF_RANGE = 5
} hotvbl_status;

HOTVBL_API const char* hotvbl_version(void);
HOTVBL_API const char* hotvbl_last_error(void);
HOTVBL_API const char* hotvbl_status_name(hotvbl_status status);

/* Strings returned through char** out-parameters. */
HOTVBL_API void hotvbl_string_free(char* str);

/* ---- operators -------------------------------------------------------- */

typedef enum hotvbl_operator_kind {
  HOTVBL_OPERATOR_ANALYSIS = 0,  /* T_m, (N-m) x N */
  HOTVBL_OPERATOR_COMPLETED = 1, /* rank-completed T_m, N x N */
  HOTVBL_OPERATOR_SYNTHESIS = 2  /* V_m, inverse of the completed operator */
} hotvbl_operator_kind;

typedef struct hotvbl_int_matrix hotvbl_int_matrix;

HOTVBL_API hotvbl_status hotvbl_operator_build(hotvbl_operator_kind kind, int order, int size,
                                               hotvbl_int_matrix** out);
HOTVBL_API size_t hotvbl_int_matrix_rows(const hotvbl_int_matrix* m);
HOTVBL_API size_t hotvbl_int_matrix_cols(const hotvbl_int_matrix* m);
/* Copies rows*cols entries, row-major; `capacity` is the length of `out`. */
HOTVBL_API hotvbl_status hotvbl_int_matrix_copy(const hotvbl_int_matrix* m, int64_t* out, size_t capacity);
HOTVBL_API void hotvbl_int_matrix_free(hotvbl_int_matrix* m);

/* ---- sparse Bayesian learning options ---------------------------------- */

typedef struct hotvbl_sbl_options {
  int max_iterations;     /* default 2000 */
  double convergence_tol; /* default 1e-6, max relative change of active precisions */
  double prune_threshold; /* default 1e10 */
  double beta_init;       /* <= 0 selects 100 / var(b) */
  double a_init;          /* default 1 */
  double jitter;          /* default 1e-10 */
} hotvbl_sbl_options;

HOTVBL_API void hotvbl_sbl_options_default(hotvbl_sbl_options* opts);

/* ---- recovery ---------------------------------------------------------- */

typedef struct hotvbl_posterior hotvbl_posterior;

/* forward: rows x cols (J x N), data: rows. `opts` may be NULL. */
HOTVBL_API hotvbl_status hotvbl_recover(const double* forward, size_t rows, size_t cols, const double* data,
                                        int order, const hotvbl_sbl_options* opts, double confidence,
                                        hotvbl_posterior** out);

/* Complex data for a real signal; real and imaginary parts are stacked. */
HOTVBL_API hotvbl_status hotvbl_recover_complex(const double* forward_re, const double* forward_im, size_t rows,
                                                size_t cols, const double* data_re, const double* data_im,
                                                int order, const hotvbl_sbl_options* opts, double confidence,
                                                hotvbl_posterior** out);

HOTVBL_API size_t hotvbl_posterior_size(const hotvbl_posterior* p);
HOTVBL_API double hotvbl_posterior_confidence(const hotvbl_posterior* p);
HOTVBL_API double hotvbl_posterior_noise_precision(const hotvbl_posterior* p);
HOTVBL_API int hotvbl_posterior_iterations(const hotvbl_posterior* p);
HOTVBL_API int hotvbl_posterior_converged(const hotvbl_posterior* p);

/* Each copies `size` values into out (capacity checked). */
HOTVBL_API hotvbl_status hotvbl_posterior_mean(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API hotvbl_status hotvbl_posterior_variance(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API hotvbl_status hotvbl_posterior_lower(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API hotvbl_status hotvbl_posterior_upper(const hotvbl_posterior* p, double* out, size_t capacity);
/* size*size values, row-major. */
HOTVBL_API hotvbl_status hotvbl_posterior_covariance(const hotvbl_posterior* p, double* out, size_t capacity);
/* Intervals at another level without re-running the solver. */
HOTVBL_API hotvbl_status hotvbl_posterior_intervals(const hotvbl_posterior* p, double level, double* lower,
                                                    double* upper, size_t capacity);

/* Edge (sparse representation) posterior. Precisions are +inf where pruned. */
HOTVBL_API hotvbl_status hotvbl_posterior_edge_mean(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API hotvbl_status hotvbl_posterior_edge_precisions(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API size_t hotvbl_posterior_history_length(const hotvbl_posterior* p);
HOTVBL_API hotvbl_status hotvbl_posterior_history(const hotvbl_posterior* p, double* out, size_t capacity);
HOTVBL_API void hotvbl_posterior_free(hotvbl_posterior* p);

/* ---- l1 baseline ------------------------------------------------------- */

typedef struct hotvbl_l1_options {
  double rho;         /* default 1 */
  int max_iterations; /* default 5000 */
  double primal_tol;  /* default 1e-6 */
  double dual_tol;    /* default 1e-6 */
  int adaptive_rho;   /* default 1 */
} hotvbl_l1_options;

typedef struct hotvbl_l1_info {
  int converged;
  int iterations;
  double objective;
  double primal_residual;
  double dual_residual;
  double stationarity;
} hotvbl_l1_info;

typedef enum hotvbl_l1_form { HOTVBL_L1_ANALYSIS = 0, HOTVBL_L1_SYNTHESIS = 1 } hotvbl_l1_form;

HOTVBL_API void hotvbl_l1_options_default(hotvbl_l1_options* opts);
/* x_out has `cols` entries; `opts` and `info` may be NULL. */
HOTVBL_API hotvbl_status hotvbl_l1_solve(hotvbl_l1_form form, const double* forward, size_t rows, size_t cols,
                                         const double* data, int order, double lambda,
                                         const hotvbl_l1_options* opts, double* x_out, hotvbl_l1_info* info);

/* ---- forward models ---------------------------------------------------- */

/* rows x cols standard normal entries drawn from a generator seeded with `seed`. */
HOTVBL_API hotvbl_status hotvbl_gaussian_forward(size_t rows, size_t cols, uint64_t seed, double* out,
                                                 size_t capacity);
/* Unitary DFT with centered frequencies; n*n entries per part. */
HOTVBL_API hotvbl_status hotvbl_dft_forward(size_t n, double* out_re, double* out_im, size_t capacity);

/* ---- experiments ------------------------------------------------------- */

typedef struct hotvbl_experiment hotvbl_experiment;

typedef enum hotvbl_method { HOTVBL_METHOD_HOTVBL = 0, HOTVBL_METHOD_L1_ORACLE = 1, HOTVBL_METHOD_L1_FIXED = 2 } hotvbl_method;

typedef struct hotvbl_trial_record {
  int test; /* 1, 2 or 3 */
  uint64_t seed;
  int trial;
  int k;
  const char* kind; /* owned by the experiment; empty outside test2 */
  double snr_db;    /* NaN for test1, +inf for noiseless */
  int m;
  hotvbl_method method;
  double rel_err;
  double max_err;
  int success;
  double realized_snr_db;
  double lambda;
  int iterations;
  int converged;
  int sparsity_count;
  double edge_width;
  double smooth_width;
  double wall_time;
  const char* error; /* owned by the experiment */
} hotvbl_trial_record;

typedef enum hotvbl_export {
  HOTVBL_EXPORT_TRIALS_CSV = 0,
  HOTVBL_EXPORT_TIMINGS_CSV = 1,
  HOTVBL_EXPORT_CURVES_CSV = 2,
  HOTVBL_EXPORT_SUMMARY_JSON = 3,
  HOTVBL_EXPORT_CONFIG_JSON = 4
} hotvbl_export;

/* Normalizes a JSON configuration (defaults filled in, validated). */
HOTVBL_API hotvbl_status hotvbl_experiment_config_resolve(const char* config_json, const char* default_test,
                                                          char** resolved_json);
/* Runs test1/2/3 as named by the config's "test" member (or default_test). */
HOTVBL_API hotvbl_status hotvbl_experiment_run(const char* config_json, const char* default_test,
                                               hotvbl_experiment** out);
/* Asks running experiments to stop after their current trials. Async-signal-safe. */
HOTVBL_API void hotvbl_experiment_cancel(void);
HOTVBL_API int hotvbl_experiment_interrupted(const hotvbl_experiment* e);
HOTVBL_API size_t hotvbl_experiment_record_count(const hotvbl_experiment* e);
HOTVBL_API hotvbl_status hotvbl_experiment_record(const hotvbl_experiment* e, size_t index,
                                                  hotvbl_trial_record* out);
HOTVBL_API hotvbl_status hotvbl_experiment_export(const hotvbl_experiment* e, hotvbl_export what, char** out);
HOTVBL_API void hotvbl_experiment_free(hotvbl_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* HOTVBL_HOTVBL_H */
