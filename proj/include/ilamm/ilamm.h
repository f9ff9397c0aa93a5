/*
 * C interface to the ilamm solver library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an ilamm_status;
 * on failure ilamm_last_error() describes the problem. The message is
 * thread-local and stays valid until the next failing call on that thread.
 */
#ifndef ILAMM_H
#define ILAMM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef ILAMM_BUILDING_LIBRARY
#    define ILAMM_API __declspec(dllexport)
#  else
#    define ILAMM_API __declspec(dllimport)
#  endif
#else
#  define ILAMM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ilamm_status {
  ILAMM_OK = 0,
  ILAMM_ERR_INVALID_ARGUMENT = 1,
  ILAMM_ERR_PARSE = 2,
  ILAMM_ERR_NOT_CONVERGED = 3,
  ILAMM_ERR_IO = 4,
  ILAMM_ERR_NUMERICAL = 5,
  ILAMM_ERR_SHAPE = 6,
  ILAMM_ERR_INTERNAL = 7
} ilamm_status;

typedef enum ilamm_loss {
  ILAMM_LOSS_SQUARED = 0,
  ILAMM_LOSS_LOGISTIC = 1,
  ILAMM_LOSS_HUBER = 2
} ilamm_loss;

typedef enum ilamm_penalty {
  ILAMM_PENALTY_LASSO = 0,
  ILAMM_PENALTY_SCAD = 1,
  ILAMM_PENALTY_MCP = 2,
  ILAMM_PENALTY_CAPPED_L1 = 3
} ilamm_penalty;

typedef struct ilamm_problem ilamm_problem;
typedef struct ilamm_config ilamm_config;
typedef struct ilamm_result ilamm_result;
typedef struct ilamm_bench ilamm_bench;

ILAMM_API const char* ilamm_version(void);
ILAMM_API const char* ilamm_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Fixed-lambda configuration with default solver settings. A non-positive
 * `a` selects the family default (SCAD 3.7, MCP 3, capped-l1 3). */
ILAMM_API ilamm_status ilamm_config_create(ilamm_loss loss, ilamm_penalty family,
                                           double a, double lambda,
                                           ilamm_config** out);
/* JSON run configuration; see README for the accepted keys. */
ILAMM_API ilamm_status ilamm_config_parse(const char* json_text,
                                          ilamm_config** out);
ILAMM_API ilamm_status ilamm_config_load(const char* path, ilamm_config** out);
ILAMM_API ilamm_status ilamm_config_set_tolerances(ilamm_config* cfg,
                                                   double eps_c, double eps_t);
ILAMM_API ilamm_status ilamm_config_set_seed(ilamm_config* cfg, uint64_t seed);
ILAMM_API void ilamm_config_free(ilamm_config* cfg);

/* ---- problems --------------------------------------------------------- */

/* Copies an n x d row-major design and length-n response. huber_alpha <= 0
 * selects sqrt(log d / n). */
ILAMM_API ilamm_status ilamm_problem_create(size_t n, size_t d,
                                            const double* x_row_major,
                                            const double* y, ilamm_loss loss,
                                            double huber_alpha,
                                            ilamm_problem** out);
/* Reads X.csv / y.csv with the loss taken from `cfg`. */
ILAMM_API ilamm_status ilamm_problem_load_csv(const char* x_path,
                                              const char* y_path,
                                              const ilamm_config* cfg,
                                              ilamm_problem** out);
ILAMM_API size_t ilamm_problem_n(const ilamm_problem* p);
ILAMM_API size_t ilamm_problem_d(const ilamm_problem* p);
ILAMM_API void ilamm_problem_free(ilamm_problem* p);

/* ---- solving ---------------------------------------------------------- */

/* Runs cross-validation when the configuration asks for it, then the
 * contraction and tightening stages. On ILAMM_ERR_NOT_CONVERGED `*out`
 * still receives a result holding the best iterate, flagged non-converged. */
ILAMM_API ilamm_status ilamm_solve(const ilamm_problem* p,
                                   const ilamm_config* cfg, ilamm_result** out);
/* As ilamm_solve, and writes the per-iteration trace CSV to `trace_path`. */
ILAMM_API ilamm_status ilamm_trace(const ilamm_problem* p,
                                   const ilamm_config* cfg,
                                   const char* trace_path, ilamm_result** out);

ILAMM_API size_t ilamm_result_dim(const ilamm_result* r);
ILAMM_API int ilamm_result_converged(const ilamm_result* r);
ILAMM_API int ilamm_result_stages_run(const ilamm_result* r);
ILAMM_API int ilamm_result_total_iterations(const ilamm_result* r);
ILAMM_API double ilamm_result_lambda(const ilamm_result* r);
ILAMM_API ilamm_status ilamm_result_coefficients(const ilamm_result* r,
                                                 double* out, size_t len);
ILAMM_API ilamm_status ilamm_result_write_coefficients(const ilamm_result* r,
                                                       const char* path);
ILAMM_API ilamm_status ilamm_result_write_metadata(const ilamm_result* r,
                                                   const char* path);
ILAMM_API void ilamm_result_free(ilamm_result* r);

/* ---- benchmarks ------------------------------------------------------- */

ILAMM_API ilamm_status ilamm_bench_load(const char* scenario_path,
                                        ilamm_bench** out);
ILAMM_API ilamm_status ilamm_bench_parse(const char* scenario_json,
                                         ilamm_bench** out);
ILAMM_API ilamm_status ilamm_bench_set_threads(ilamm_bench* b, int threads);
ILAMM_API ilamm_status ilamm_bench_set_seed(ilamm_bench* b, uint64_t seed);
ILAMM_API ilamm_status ilamm_bench_run(ilamm_bench* b);
ILAMM_API size_t ilamm_bench_row_count(const ilamm_bench* b);
/* Summary row i after ilamm_bench_run. `method` points into the handle. */
ILAMM_API ilamm_status ilamm_bench_row(const ilamm_bench* b, size_t i,
                                       const char** method, double* median_mse,
                                       double* median_tp, double* median_fp,
                                       int* failures);
ILAMM_API ilamm_status ilamm_bench_write_summary(const ilamm_bench* b,
                                                 const char* path);
ILAMM_API ilamm_status ilamm_bench_write_replicates(const ilamm_bench* b,
                                                    const char* path);
ILAMM_API void ilamm_bench_free(ilamm_bench* b);

#ifdef __cplusplus
}
#endif

#endif /* ILAMM_H */
