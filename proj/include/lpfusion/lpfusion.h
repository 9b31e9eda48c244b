/* lpfusion: lp-norm constrained fusion of one-class classifier scores.
 *
 * C interface to the shared library. All matrices are dense row-major
 * double buffers. Functions return LPF_OK on success; on failure they
 * return an error code and leave a message readable through
 * lpf_last_error() (thread local). Handles are opaque and owned by the
 * caller via the matching *_free function.
 */
#ifndef LPFUSION_H
#define LPFUSION_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LPF_API __declspec(dllexport)
#else
#define LPF_API __attribute__((visibility("default")))
#endif

typedef enum lpf_status {
  LPF_OK = 0,
  LPF_ERR_ARGUMENT = 1,  /* invalid argument or precondition violation */
  LPF_ERR_DIMENSION = 2, /* shape mismatch between inputs */
  LPF_ERR_PARSE = 3,     /* malformed serialized input */
  LPF_ERR_NUMERIC = 4,   /* numerical failure (factorization, ...) */
  LPF_ERR_INTERNAL = 5
} lpf_status;

/* Message describing the most recent failure on this thread. */
LPF_API const char* lpf_last_error(void);

LPF_API const char* lpf_version(void);

/* ------------------------------------------------------------------ */
/* Core objective                                                      */

/* Linear minimization oracle over the lp ball (p in [1, inf]; pass
 * INFINITY for the max norm). Writes the minimizer of z.g over
 * ||z||_p <= 1 into z_out (length r). A zero gradient sets *stationary
 * to 1 and leaves z_out untouched. */
LPF_API lpf_status lpf_lmo_lp_ball(const double* grad, int32_t r, double p,
                                   double* z_out, int32_t* stationary);

/* Frank-Wolfe duality gap (omega - z).grad. */
LPF_API lpf_status lpf_duality_gap(const double* omega, const double* z,
                                   const double* grad, int32_t r,
                                   double* gap_out);

/* Hinge loss sum_i max(0, 1 - y_i s_i.omega) for an n x r score matrix. */
LPF_API lpf_status lpf_hinge_objective(const double* scores, int32_t n,
                                       int32_t r, const int32_t* labels,
                                       const double* omega, double* out);

/* Subgradient of the hinge loss (length r). */
LPF_API lpf_status lpf_hinge_subgradient(const double* scores, int32_t n,
                                         int32_t r, const int32_t* labels,
                                         const double* omega, double* grad_out);

/* Least-squares variant sum_i (1 - y_i s_i.omega)^2 (ablation loss). */
LPF_API lpf_status lpf_least_squares_objective(const double* scores, int32_t n,
                                               int32_t r, const int32_t* labels,
                                               const double* omega, double* out);

/* ------------------------------------------------------------------ */
/* Solver                                                              */

typedef enum lpf_loss {
  LPF_LOSS_HINGE = 0,
  LPF_LOSS_LEAST_SQUARES = 1
} lpf_loss;

typedef struct lpf_solver_config {
  double p;             /* norm parameter, >= 1 (INFINITY for max norm) */
  int32_t max_iters;    /* T */
  double gap_tol;       /* stop when the duality gap is <= this */
  double precision_tol; /* stop when max|w_next - w| is <= this */
  int32_t loss;         /* lpf_loss */
} lpf_solver_config;

/* Fill a config with the defaults (p=2, T=500, gap_tol=0,
 * precision_tol=1e-3, hinge loss). */
LPF_API void lpf_solver_config_init(lpf_solver_config* config);

typedef struct lpf_trace lpf_trace; /* opaque solve trace */

LPF_API int32_t lpf_trace_length(const lpf_trace* trace);
/* Termination reason: "max-iters", "gap", "precision" or
 * "zero-subgradient". */
LPF_API const char* lpf_trace_termination(const lpf_trace* trace);
LPF_API lpf_status lpf_trace_entry(const lpf_trace* trace, int32_t index,
                                   int32_t* t, double* objective, double* gap,
                                   double* step);
/* Canonical CSV rendering of the trace (one row per iteration, header
 * carries the termination reason). Caller owns the string. */
LPF_API lpf_status lpf_trace_to_csv(const lpf_trace* trace, char** csv_out);
LPF_API void lpf_trace_free(lpf_trace* trace);

/* Solve min sum_i loss(1 - y_i s_i.omega) s.t. ||omega||_p <= 1 with
 * Frank-Wolfe. scores is n x r row-major, labels holds +1/-1 (NULL means
 * all +1). omega_out has length r; trace_out may be NULL. */
LPF_API lpf_status lpf_fw_solve(const double* scores, int32_t n, int32_t r,
                                const int32_t* labels,
                                const lpf_solver_config* config,
                                double* omega_out, lpf_trace** trace_out);

/* ------------------------------------------------------------------ */
/* Fusion model                                                        */

typedef struct lpf_model lpf_model; /* opaque fitted fusion model */

typedef struct lpf_train_config {
  lpf_solver_config solver;
  int32_t rho;         /* two-sided min-max percentage, in {1,...,10} */
  double threshold;    /* decision threshold (default 1) */
  int32_t orientation; /* +1: scores already target-positive; -1: novelty */
} lpf_train_config;

LPF_API void lpf_train_config_init(lpf_train_config* config);

/* Orient, fit the per-classifier score normalizers on all rows, and solve
 * for the fusion weights. labels may be NULL (all +1, the pure scenario). */
LPF_API lpf_status lpf_model_train(const double* raw_scores, int32_t n,
                                   int32_t r, const int32_t* labels,
                                   const lpf_train_config* config,
                                   lpf_model** model_out,
                                   lpf_trace** trace_out);

LPF_API int32_t lpf_model_classifiers(const lpf_model* model);
LPF_API lpf_status lpf_model_weights(const lpf_model* model, double* omega_out);
LPF_API lpf_status lpf_model_threshold(const lpf_model* model, double* out);

/* Fused (oriented + normalized + weighted) score of one raw score row. */
LPF_API lpf_status lpf_model_decision(const lpf_model* model,
                                      const double* raw_scores, int32_t r,
                                      double* fused_out);

/* +1 iff the fused score exceeds the threshold, else -1. */
LPF_API lpf_status lpf_model_predict(const lpf_model* model,
                                     const double* raw_scores, int32_t r,
                                     int32_t* label_out);

/* Serialize to / parse from the canonical JSON model document. Strings
 * returned through text_out are owned by the caller (lpf_string_free). */
LPF_API lpf_status lpf_model_to_text(const lpf_model* model, char** text_out);
LPF_API lpf_status lpf_model_from_text(const char* text, lpf_model** model_out);
LPF_API void lpf_model_free(lpf_model* model);

LPF_API void lpf_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Base learners                                                       */

typedef enum lpf_learner_kind {
  LPF_LEARNER_GMM = 0,
  LPF_LEARNER_SVDD = 1,
  LPF_LEARNER_GP = 2,
  LPF_LEARNER_KPCA = 3
} lpf_learner_kind;

typedef struct lpf_learner lpf_learner; /* opaque fitted one-class learner */

/* Fit one built-in learner on an n x d feature matrix. sigma is the RBF
 * width (svdd/gp/kpca), q the subspace dimension (kpca), seed drives the
 * mixture seeding (gmm). */
LPF_API lpf_status lpf_learner_fit(int32_t kind, const double* features,
                                   int32_t n, int32_t d, double sigma,
                                   int32_t q, uint64_t seed,
                                   lpf_learner** learner_out);

/* Novelty scores (higher = more anomalous) for m feature rows. */
LPF_API lpf_status lpf_learner_score(const lpf_learner* learner,
                                     const double* features, int32_t m,
                                     int32_t d, double* scores_out);

/* Non-empty when the fit degraded (e.g. fewer mixture components than
 * requested). */
LPF_API const char* lpf_learner_warning(const lpf_learner* learner);
LPF_API void lpf_learner_free(lpf_learner* learner);

/* ------------------------------------------------------------------ */
/* Metrics                                                             */

LPF_API lpf_status lpf_auc(const double* positive, int32_t n_positive,
                           const double* negative, int32_t n_negative,
                           double* auc_out);

LPF_API lpf_status lpf_gmean(int64_t tp, int64_t fn, int64_t tn, int64_t fp,
                             double* gmean_out);

/* ------------------------------------------------------------------ */
/* Benchmark protocol                                                  */

typedef enum lpf_scenario {
  LPF_SCENARIO_PURE = 0,
  LPF_SCENARIO_NONPURE = 1
} lpf_scenario;

typedef struct lpf_grid_config {
  const double* p_grid;     /* NULL = default {32/31,...,100} */
  int32_t p_grid_len;
  const int32_t* rho_grid;  /* NULL = default {1,...,10} */
  int32_t rho_grid_len;
  const double* sigma_grid; /* NULL = default {0.01,0.1,0.5,1,10} */
  int32_t sigma_grid_len;
  const int32_t* q_grid;    /* NULL = automatic {2,6,10,...} */
  int32_t q_grid_len;
  int32_t scenario;         /* lpf_scenario */
  int32_t n_repeats;        /* default 10 when 0 */
  uint64_t seed;
  lpf_solver_config solver;
  int32_t threads;          /* 0 = hardware concurrency */
} lpf_grid_config;

LPF_API void lpf_grid_config_init(lpf_grid_config* config);

/* Run the split/select/test protocol on a features dataset (data_kind 0)
 * or a precomputed score matrix (data_kind 1, orientation applies). The
 * JSON report is returned through report_out (lpf_string_free). */
LPF_API lpf_status lpf_benchmark_run(const double* data, int32_t n, int32_t d,
                                     const int32_t* labels, int32_t data_kind,
                                     const int32_t* orientation,
                                     const lpf_grid_config* config,
                                     char** report_out);

/* Benchmark across the p grid: the sweep report plus the weight-versus-p
 * CSV (both owned by the caller). */
LPF_API lpf_status lpf_sweep_run(const double* data, int32_t n, int32_t d,
                                 const int32_t* labels, int32_t data_kind,
                                 const int32_t* orientation,
                                 const lpf_grid_config* config,
                                 char** report_out, char** weights_csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LPFUSION_H */
