/* Copyright 2026 The qsv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qsv two-qubit state-verification library.
 *
 * Every function returns a qsv_status. On failure the message is available
 * from qsv_last_error() on the calling thread until the next failing call.
 * Handles are opaque; each *_create has a matching *_destroy that accepts
 * NULL. Matrices are passed as separate real/imaginary arrays of 16 doubles
 * in row-major order over the basis (HH, HV, VH, VV). */

#ifndef QSV_QSV_H
#define QSV_QSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(QSV_BUILDING_LIBRARY)
#define QSV_API __attribute__((visibility("default")))
#else
#define QSV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsv_status {
  QSV_OK = 0,
  QSV_ERR_INVALID_ARGUMENT = 1,
  QSV_ERR_REGIME = 2,
  QSV_ERR_NUMERICAL = 3,
  QSV_ERR_ALL_CENSORED = 4,
  QSV_ERR_IO = 5,
  QSV_ERR_INTERNAL = 6
} qsv_status;

typedef enum qsv_family {
  QSV_FAMILY_AUTO = -1,
  QSV_FAMILY_NONADAPTIVE = 0,
  QSV_FAMILY_ADAPTIVE = 1,
  QSV_FAMILY_BELL = 2,
  QSV_FAMILY_PRODUCT = 3
} qsv_family;

typedef enum qsv_frame { QSV_FRAME_THEORETICAL = 0, QSV_FRAME_EXPERIMENTAL = 1 } qsv_frame;

typedef enum qsv_region {
  QSV_REGION_SMALL = 0,
  QSV_REGION_LARGE = 1,
  QSV_REGION_BOTH = 2,
  QSV_REGION_INDETERMINATE = 3
} qsv_region;

typedef struct qsv_strategy qsv_strategy;
typedef struct qsv_device qsv_device;
typedef struct qsv_task_a_result qsv_task_a_result;

QSV_API const char* qsv_version(void);
QSV_API const char* qsv_last_error(void);
QSV_API const char* qsv_status_name(qsv_status status);

/* Seed and worker count for multi-round runs; threads == 0 reads QSV_THREADS
 * or falls back to the hardware concurrency. Results never depend on it. */
typedef struct qsv_run_options {
  uint64_t seed;
  unsigned threads;
} qsv_run_options;

QSV_API unsigned qsv_default_thread_count(void);

/* ---- Strategies --------------------------------------------------------- */

typedef struct qsv_spectrum {
  double lambda2;
  double lambda4;
  double weight; /* alpha, beta, 1/3 or 1 depending on family */
  double delta_eps_coefficient; /* 1 - lambda2 */
  int family; /* qsv_family */
} qsv_spectrum;

typedef struct qsv_test_info {
  char label[16];
  double selection_probability;
  int adaptive; /* 1 for feed-forward tests */
} qsv_test_info;

/* family QSV_FAMILY_AUTO picks bell at pi/4, product at 0 or pi/2 and
 * nonadaptive otherwise. */
QSV_API qsv_status qsv_strategy_create(int family, double theta, double phi, int frame,
                                       qsv_strategy** out);
QSV_API void qsv_strategy_destroy(qsv_strategy* strategy);

QSV_API qsv_status qsv_family_name(int family, const char** out);
QSV_API qsv_status qsv_family_parse(const char* name, int* out);

QSV_API qsv_status qsv_strategy_spectrum(const qsv_strategy* strategy, qsv_spectrum* out);
QSV_API qsv_status qsv_strategy_test_count(const qsv_strategy* strategy, size_t* out);
QSV_API qsv_status qsv_strategy_test_info(const qsv_strategy* strategy, size_t index,
                                          qsv_test_info* out);
/* Pass operator of one test (the effective projector for feed-forward tests). */
QSV_API qsv_status qsv_strategy_test_operator(const qsv_strategy* strategy, size_t index,
                                              double re[16], double im[16]);
QSV_API qsv_status qsv_strategy_operator(const qsv_strategy* strategy, double re[16], double im[16]);
/* Numeric eigenvalues of the strategy operator, descending. */
QSV_API qsv_status qsv_strategy_eigenvalues(const qsv_strategy* strategy, double out[4]);
QSV_API qsv_status qsv_strategy_target(const qsv_strategy* strategy, double re[4], double im[4]);
/* Smallest N with (1 - (1 - lambda2) eps)^N <= delta. */
QSV_API qsv_status qsv_required_copies(const qsv_strategy* strategy, double epsilon, double delta,
                                       int64_t* out);

/* ---- Devices ------------------------------------------------------------ */

/* Diagonal mixture with the given fidelity; p4 < 0 splits the infidelity
 * equally over the three other verifier-basis states. */
QSV_API qsv_status qsv_device_create_fidelity(double fidelity, double p4, qsv_device** out);
QSV_API qsv_status qsv_device_create_mixture(const double p[4], qsv_device** out);
QSV_API qsv_status qsv_device_create_werner(double visibility, qsv_device** out);
QSV_API qsv_status qsv_device_create_explicit(const double re[16], const double im[16],
                                              qsv_device** out);
QSV_API qsv_status qsv_device_create_exact(qsv_device** out);
QSV_API void qsv_device_destroy(qsv_device* device);
QSV_API qsv_status qsv_device_set_eom_flip(qsv_device* device, double flip);
QSV_API qsv_status qsv_device_eom_flip(const qsv_device* device, double* out);

/* Emitted state in the strategy's frame. */
QSV_API qsv_status qsv_device_state(const qsv_device* device, const qsv_strategy* strategy,
                                    double re[16], double im[16]);
/* Exact per-copy pass probability, including the EOM flip. */
QSV_API qsv_status qsv_pass_probability(const qsv_strategy* strategy, const qsv_device* device,
                                        double* out);
/* Sets the device's EOM flip so the adaptive pass rate equals target_rate. */
QSV_API qsv_status qsv_calibrate_eom_flip(const qsv_strategy* strategy, qsv_device* device,
                                          double target_rate, double* flip_out);
/* Fidelity at which a diagonal-mixture device passes with the given rate. */
QSV_API qsv_status qsv_fidelity_for_pass_rate(const qsv_strategy* strategy, double pass_rate,
                                              double* out);

/* ---- Task A --------------------------------------------------------------- */

typedef struct qsv_task_a_summary {
  int64_t rounds;
  int64_t censored;
  int64_t failures;
  int64_t exposure;
  int all_censored;
  double delta_eps_hat;
  double epsilon_hat;
  double std_error;
  double upper_bound; /* 95% bound on epsilon when all_censored */
  double confidence;
  int64_t n_for_confidence;
  double true_delta_eps;
} qsv_task_a_summary;

QSV_API qsv_status qsv_task_a_run(const qsv_strategy* strategy, const qsv_device* device,
                                  int64_t rounds, int64_t max_copies, double confidence,
                                  const qsv_run_options* options, qsv_task_a_result** out);
QSV_API void qsv_task_a_result_destroy(qsv_task_a_result* result);
QSV_API qsv_status qsv_task_a_summary_get(const qsv_task_a_result* result, qsv_task_a_summary* out);
/* Distinct first-failure indices, ascending. */
QSV_API qsv_status qsv_task_a_histogram_size(const qsv_task_a_result* result, size_t* out);
QSV_API qsv_status qsv_task_a_histogram_entry(const qsv_task_a_result* result, size_t index,
                                              int64_t* n_first, int64_t* count);

/* ---- Task B --------------------------------------------------------------- */

typedef struct qsv_task_b_point {
  int64_t n;
  double m_pass; /* mean over rounds */
  double m_pass_sd;
  int has_delta;
  double delta;
  int has_delta_s;
  double delta_s;
  int has_delta_l;
  double delta_l;
  int region; /* qsv_region */
} qsv_task_b_point;

/* One point per checkpoint (strictly increasing). */
QSV_API qsv_status qsv_task_b_run(const qsv_strategy* strategy, const qsv_device* device,
                                  const int64_t* checkpoints, size_t count, int64_t rounds,
                                  double eps_min, double eps_max, const qsv_run_options* options,
                                  qsv_task_b_point* out);
/* Confidence at a given (mean) pass count without simulation. */
QSV_API qsv_status qsv_task_b_point_at(const qsv_strategy* strategy, int64_t n, double m_pass,
                                       double eps_min, double eps_max, qsv_task_b_point* out);
/* Writes the per-copy record of a single run as CSV
 * (copy_index,setting,alice,passed) and reports its pass count. */
QSV_API qsv_status qsv_write_run_records(const qsv_strategy* strategy, const qsv_device* device,
                                         int64_t n_copies, uint64_t seed, const char* path,
                                         int64_t* m_pass);

/* ---- Scaling -------------------------------------------------------------- */

typedef struct qsv_scaling_point {
  int64_t n;
  double epsilon;
  double std_error;
  int64_t rounds;
} qsv_scaling_point;

/* `out` must hold n_max entries; *count receives the number written. */
QSV_API qsv_status qsv_scaling_run(const qsv_strategy* strategy, const qsv_device* device,
                                   int64_t n_max, int64_t rounds, double delta,
                                   const qsv_run_options* options, qsv_scaling_point* out,
                                   size_t* count);

/* ---- Tomography comparison ------------------------------------------------ */

typedef struct qsv_tomo_point {
  int64_t n;
  double fidelity;
  double dF;
  double delta_tomo;
  double eps_tomo;
  double delta_verif;
  int has_eps_verif;
  double eps_verif;
} qsv_tomo_point;

QSV_API qsv_status qsv_tomo_compare_run(const qsv_strategy* strategy, const qsv_device* device,
                                        const int64_t* checkpoints, size_t count, int64_t rounds,
                                        double eps_min, double delta, int bootstrap_resamples,
                                        const qsv_run_options* options, qsv_tomo_point* out);
/* One tomography run on the device's state: fidelity estimate and bootstrap dF. */
QSV_API qsv_status qsv_tomo_estimate(const qsv_strategy* strategy, const qsv_device* device,
                                     int64_t n_copies, int bootstrap_resamples, uint64_t seed,
                                     double* fidelity, double* dF);

/* ---- Analysis ------------------------------------------------------------- */

QSV_API qsv_status qsv_kl_divergence(double x, double y, double* out);
QSV_API qsv_status qsv_chernoff_delta(int64_t m_pass, int64_t n, double mu, double* out);
QSV_API qsv_status qsv_copies_for_delta(double rate, double mu, double delta, int64_t* out);
QSV_API qsv_status qsv_epsilon_at(const qsv_spectrum* spectrum, int64_t n, double pass_rate,
                                  double delta, int region, double* out);
QSV_API qsv_status qsv_epsilon_asymptote(double pass_rate, double lambda, double* out);
QSV_API qsv_status qsv_fit_loglog_slope(const double* n, const double* epsilon, size_t count,
                                        double n_lo, double n_hi, double* slope,
                                        double* std_error);
QSV_API qsv_status qsv_fit_exp_decay(const double* n, const double* delta, size_t count,
                                     double* g, double* std_error);

#ifdef __cplusplus
}
#endif

#endif /* QSV_QSV_H */
