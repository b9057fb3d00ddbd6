/*
 * Copyright 2026 The pcs-shaper Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef PCS_SHAPER_H
#define PCS_SHAPER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PCS_API __declspec(dllexport)
#else
#define PCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcs_status {
  PCS_OK = 0,
  PCS_ERR_INVALID_ARGUMENT = 1,
  PCS_ERR_INFEASIBLE = 2,
  PCS_ERR_UNDEFINED_INPUT = 3,
  PCS_ERR_IO = 4,
  PCS_ERR_INTERNAL = 5
} pcs_status;

/* Message of the most recent failure on the calling thread ("" if none). */
PCS_API const char* pcs_last_error(void);
PCS_API const char* pcs_version(void);
PCS_API void pcs_string_free(char* s);

/* Currents in mA, bandwidth in Hz, n0 in mA^2/Hz. */
typedef struct pcs_system_params {
  double i_min;
  double i_max;
  double i_dc;
  double eta;
  double gamma;
  double h_gain;
  double bandwidth;
  double n0;
} pcs_system_params;

typedef struct pcs_ofdm_config {
  int n_subcarriers;
  int cp_length;
} pcs_ofdm_config;

typedef enum pcs_ebn0_reference { PCS_EBN0_RECEIVED = 0, PCS_EBN0_TRANSMITTER = 1 } pcs_ebn0_reference;

typedef struct pcs_optimizer_config {
  int max_iters;
  double step_size;
  double tolerance;
  double gradient_step;
  double power_budget;
  double bisection_bound;
  int bisection_max_iters;
  double projection_tolerance;
  int quadrature_nodes;
  pcs_ebn0_reference eb_n0_reference;
} pcs_optimizer_config;

typedef struct pcs_clip_stats {
  double sigma_x;
  double alpha;
  double beta;
  double r_factor;
  double clip_noise_var;
} pcs_clip_stats;

PCS_API void pcs_system_params_default(pcs_system_params* out);
PCS_API void pcs_ofdm_config_default(pcs_ofdm_config* out);
PCS_API void pcs_optimizer_config_default(pcs_optimizer_config* out);

/* Non-fatal configuration diagnostics, newline separated. Free with pcs_string_free. */
PCS_API pcs_status pcs_ofdm_warnings(const pcs_ofdm_config* cfg, char** out);
PCS_API pcs_status pcs_validate_params(const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                                       const pcs_optimizer_config* opt);

/* Constellations */

typedef enum pcs_constellation_kind { PCS_QAM = 0, PCS_PAM = 1 } pcs_constellation_kind;
typedef struct pcs_constellation pcs_constellation;

PCS_API pcs_status pcs_constellation_create(pcs_constellation_kind kind, int order, int unit_power,
                                            pcs_constellation** out);
PCS_API pcs_status pcs_constellation_scaled(const pcs_constellation* c, double factor,
                                            pcs_constellation** out);
PCS_API void pcs_constellation_destroy(pcs_constellation* c);
PCS_API int pcs_constellation_order(const pcs_constellation* c);
PCS_API pcs_status pcs_constellation_point(const pcs_constellation* c, int m, double* re, double* im);
PCS_API pcs_status pcs_constellation_energies(const pcs_constellation* c, double* out, size_t n);

/* Scales c so its uniform mean energy equals the budget of the Eb/N0 point. */
PCS_API pcs_status pcs_operating_point(const pcs_constellation* c, double eb_n0_db,
                                       const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                                       pcs_ebn0_reference ref, pcs_constellation** scaled,
                                       double* power_budget);

/* Capacity */

typedef struct pcs_capacity_report {
  double capacity_bits;
  double h_y;
  double h_noise;
  double eb_n0_db;
  double sndr;
  pcs_clip_stats clip;
} pcs_capacity_report;

PCS_API pcs_status pcs_capacity(const pcs_constellation* c, const double* p, size_t n,
                                const pcs_ofdm_config* cfg, const pcs_system_params* sp, int nodes,
                                pcs_ebn0_reference ref, pcs_capacity_report* out);
PCS_API pcs_status pcs_clip_stats_for(const pcs_constellation* c, const double* p, size_t n,
                                      const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                                      pcs_clip_stats* out);
PCS_API pcs_status pcs_power_for_eb_n0(double eb_n0_db, int order, const pcs_ofdm_config* cfg,
                                       const pcs_system_params* sp, pcs_ebn0_reference ref, double* out);
PCS_API pcs_status pcs_eb_n0_db(double sigma_x2, int order, const pcs_ofdm_config* cfg,
                                const pcs_system_params* sp, pcs_ebn0_reference ref, double* out);

/* Projection and optimization */

/* p_out receives n entries; lambda and nu may be NULL. */
PCS_API pcs_status pcs_project(const double* q, const double* a, size_t n, double power,
                               const pcs_optimizer_config* opt, double* p_out, double* lambda,
                               double* nu);

typedef void (*pcs_iteration_callback)(int iteration, double capacity, double step_norm,
                                       double projection_seconds, void* user);

typedef struct pcs_trace pcs_trace;

/* start may be NULL for the uniform distribution. */
PCS_API pcs_status pcs_optimize(const pcs_constellation* c, const pcs_ofdm_config* cfg,
                                const pcs_system_params* sp, const pcs_optimizer_config* opt,
                                const double* start, size_t n, pcs_iteration_callback callback,
                                void* user, pcs_trace** out);
PCS_API void pcs_trace_destroy(pcs_trace* t);
PCS_API int pcs_trace_iterations(const pcs_trace* t);
PCS_API int pcs_trace_converged(const pcs_trace* t);
PCS_API double pcs_trace_final_capacity(const pcs_trace* t);
PCS_API size_t pcs_trace_capacity_count(const pcs_trace* t);
PCS_API double pcs_trace_capacity(const pcs_trace* t, size_t k);
PCS_API size_t pcs_trace_step_count(const pcs_trace* t);
PCS_API double pcs_trace_step_norm(const pcs_trace* t, size_t k);
PCS_API double pcs_trace_projection_seconds(const pcs_trace* t, size_t k);
PCS_API pcs_status pcs_trace_distribution(const pcs_trace* t, double* out, size_t n);

/* Studies */

typedef struct pcs_sweep_point {
  double eb_n0_db;
  double power_budget;
  double capacity_uniform;
  double capacity_shaped;
  pcs_clip_stats clip_uniform;
  pcs_clip_stats clip_shaped;
  int iterations;
  int converged;
} pcs_sweep_point;

typedef struct pcs_sweep pcs_sweep;

PCS_API pcs_status pcs_capacity_sweep(const pcs_constellation* c, const pcs_ofdm_config* cfg,
                                      const pcs_system_params* sp, const double* eb_n0_grid,
                                      size_t n_points, const pcs_optimizer_config* opt, int restarts,
                                      uint64_t seed, pcs_sweep** out);
PCS_API void pcs_sweep_destroy(pcs_sweep* s);
PCS_API size_t pcs_sweep_size(const pcs_sweep* s);
PCS_API pcs_status pcs_sweep_point_at(const pcs_sweep* s, size_t i, pcs_sweep_point* out);
PCS_API pcs_status pcs_sweep_distribution(const pcs_sweep* s, size_t i, double* out, size_t n);

typedef struct pcs_convergence pcs_convergence;

PCS_API pcs_status pcs_convergence_study(const pcs_constellation* c, const pcs_ofdm_config* cfg,
                                         const pcs_system_params* sp, const pcs_optimizer_config* opt,
                                         double eb_n0_db, int n_starts, uint64_t seed,
                                         pcs_convergence** out);
PCS_API void pcs_convergence_destroy(pcs_convergence* s);
PCS_API int pcs_convergence_starts(const pcs_convergence* s);
PCS_API int pcs_convergence_iterations(const pcs_convergence* s, int start);
PCS_API int pcs_convergence_converged(const pcs_convergence* s, int start);
PCS_API size_t pcs_convergence_length(const pcs_convergence* s);
PCS_API double pcs_convergence_mean_capacity(const pcs_convergence* s, size_t k);
PCS_API double pcs_convergence_mean_iterations(const pcs_convergence* s);
PCS_API double pcs_convergence_mean_projection_seconds(const pcs_convergence* s);

typedef enum pcs_pcs_source { PCS_SOURCE_UNIFORM = 0, PCS_SOURCE_RANDOM_PCS = 1 } pcs_pcs_source;
typedef enum pcs_ccdf_averaging { PCS_CCDF_PER_THRESHOLD = 0, PCS_CCDF_POOLED = 1 } pcs_ccdf_averaging;

/* exceed_out receives n_thresholds probabilities Pr(PAPR >= threshold). */
PCS_API pcs_status pcs_papr_ccdf(const pcs_constellation* c, pcs_pcs_source source,
                                 const pcs_ofdm_config* cfg, long long n_frames, int n_distributions,
                                 const double* thresholds_db, size_t n_thresholds, uint64_t seed,
                                 pcs_ccdf_averaging averaging, double* exceed_out);

PCS_API pcs_status pcs_empirical_bussgang(double sigma_x, double alpha, double beta, long long n_samples,
                                          uint64_t seed, double* r_hat, double* var_hat,
                                          double* residual_correlation);

PCS_API pcs_status pcs_mc_mutual_information(const pcs_constellation* c, const double* p, size_t n,
                                             const pcs_clip_stats* clip, const pcs_system_params* sp,
                                             long long n_samples, uint64_t seed, double* bits,
                                             double* std_error);

/* Validation suites */

typedef struct pcs_validate_options {
  long long bussgang_samples;
  int bussgang_grid;
  int capacity_instances;
  long long capacity_samples;
  int projection_instances;
  int quadrature_nodes;
  uint64_t seed;
} pcs_validate_options;

PCS_API void pcs_validate_options_default(pcs_validate_options* out);

/* Runs the Bussgang, quadrature-vs-Monte-Carlo and projection suites. The
   report is a JSON document without timings; free with pcs_string_free. */
PCS_API pcs_status pcs_validate(const pcs_validate_options* options, const pcs_ofdm_config* cfg,
                                const pcs_system_params* sp, char** json_out, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
