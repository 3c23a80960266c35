/* gcwsnet — pGMM kernel hashing, count-sketch compression, NRFF baseline,
 * and a small neural trainer behind a C shared-library API.
 *
 * All functions return gcwsnet_status; gcwsnet_last_error() describes the
 * most recent failure on the calling thread. Handles are opaque and owned
 * by the caller until the matching *_free call.
 */
#ifndef GCWSNET_H
#define GCWSNET_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcwsnet_status {
    GCWSNET_OK = 0,
    GCWSNET_ERR_EMPTY_VECTOR = 1,
    GCWSNET_ERR_INVALID_PARAMETER = 2,
    GCWSNET_ERR_OVERFLOW = 3,
    GCWSNET_ERR_CONFIG_MISMATCH = 4,
    GCWSNET_ERR_CORRUPT_INPUT = 5,
    GCWSNET_ERR_IO = 6,
    GCWSNET_ERR_DIVERGENCE = 7,
    GCWSNET_ERR_INTERNAL = 8
} gcwsnet_status;

/* Message for the last error raised on this thread; never NULL. */
const char* gcwsnet_last_error(void);

/* ---- datasets (LIBSVM text format, 1-based indices on disk) ---- */

typedef struct gcwsnet_dataset gcwsnet_dataset;

gcwsnet_status gcwsnet_dataset_load(const char* path, gcwsnet_dataset** out);
void gcwsnet_dataset_free(gcwsnet_dataset* ds);
int64_t gcwsnet_dataset_rows(const gcwsnet_dataset* ds);
int64_t gcwsnet_dataset_dim(const gcwsnet_dataset* ds);

/* ---- exact kernels on dataset rows ---- */

gcwsnet_status gcwsnet_pgmm(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                            double p, double* out);
gcwsnet_status gcwsnet_cosine(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                              double* out);
gcwsnet_status gcwsnet_rbf(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                           double gamma, double* out);

/* ---- GCWS hashing of a single row ----
 * codes_out must hold k uint32 values. */
gcwsnet_status gcwsnet_hash_row(const gcwsnet_dataset* ds, int64_t row, double p,
                                int k, int b, int tbits, uint64_t seed,
                                uint32_t* codes_out);

/* ---- closed forms ---- */

/* R = (m/2^b)(1+P_b^2)/(P_b(1-P_b)), P_b = J + (1-J)/2^b; +inf if degenerate. */
double gcwsnet_cs_ratio(int b, double jaccard, double m);

/* Var(P_b estimator) under count-sketch with B bins. */
double gcwsnet_cs_variance(double pb, int k, double bins);

/* Normalized / unnormalized RFF asymptotic variances. */
void gcwsnet_nrff_variance(double rho, double gamma, double* v_normalized,
                           double* v_unnormalized);

/* ---- run-level commands ----
 * Each writes its primary output plus "<out>.manifest.json" recording
 * parameters, input digests, and wall-clock time. */

gcwsnet_status gcwsnet_run_hash(const char* input_libsvm, double p, int k, int b,
                                int tbits, uint64_t seed, const char* out_path);

gcwsnet_status gcwsnet_run_sketch(const char* codes_path, int64_t bins, uint64_t seed,
                                  const char* out_path);

gcwsnet_status gcwsnet_run_nrff(const char* input_libsvm, int k, double gamma,
                                uint64_t seed, int normalize, const char* out_path);

/* features_path may be a LIBSVM file (preproc_spec applies: "raw",
 * "power:2", "logpower:2", "gcws:p=..,k=..,b=..", "gcws+cs:...,B=..",
 * "nrff:k=..,gamma=..") or a dump written by run_hash / run_sketch /
 * run_nrff, whose header then fixes the feature configuration.
 * model_out may be NULL to skip the checkpoint. */
gcwsnet_status gcwsnet_run_train(const char* features_path, const char* eval_path,
                                 const char* preproc_spec, int layers, int hidden,
                                 double lr, int batch, double epochs, uint64_t seed,
                                 const char* history_out, const char* model_out);

/* suite: "t1", "t2", "0bit", "cs", "nrff", or "all".
 * *all_passed is set to 1 when every Monte Carlo verdict passed. */
gcwsnet_status gcwsnet_run_validate(const char* suite, int64_t trials, uint64_t seed,
                                    const char* report_out, int* all_passed);

/* Comma-separated lists, e.g. b_list="8,12,16", m_list="1,16,256",
 * j_grid="0.05:0.95:0.05" (start:stop:step) or an explicit list. */
gcwsnet_status gcwsnet_run_ratio(const char* b_list, const char* m_list,
                                 const char* j_grid, const char* out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GCWSNET_H */
