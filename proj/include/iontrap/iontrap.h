// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IONTRAP_IONTRAP_H_
#define IONTRAP_IONTRAP_H_

/* C interface to the iontrap library. All functions return an itr_status;
 * on failure itr_last_error() describes the problem (per thread). Strings
 * returned through char** are owned by the caller and released with
 * itr_string_free. Matrices are 4x4, row-major, 16 itr_complex entries. */

#include <stddef.h>
#include <stdint.h>

#if defined(IONTRAP_BUILDING_LIBRARY)
#define ITR_API __attribute__((visibility("default")))
#else
#define ITR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  ITR_OK = 0,
  ITR_INVALID_ARGUMENT = 1,
  ITR_OUT_OF_RANGE = 2,
  ITR_NOT_UNITARY = 3,
  ITR_IO = 4,
  ITR_INTERNAL = 5
} itr_status;

ITR_API const char* itr_version(void);
ITR_API const char* itr_last_error(void);
ITR_API const char* itr_status_string(itr_status status);
ITR_API void itr_string_free(char* s);

/* ---- device layout ---------------------------------------------------- */

typedef struct itr_layout itr_layout;

/* Direction bits for itr_layout_lane_direction. */
enum { ITR_DIR_RIGHT = 1, ITR_DIR_DOWN = 2, ITR_DIR_LEFT = 4, ITR_DIR_UP = 8 };

ITR_API itr_status itr_layout_create(int device_size, int resolution, itr_layout** out);
ITR_API void itr_layout_destroy(itr_layout* layout);
ITR_API itr_status itr_layout_counts(const itr_layout* layout, int* positions, int* interior_zones,
                                     int* exterior_zones);
ITR_API itr_status itr_layout_json(const itr_layout* layout, char** out);
ITR_API itr_status itr_layout_lane_direction(const itr_layout* layout, int x, int y, unsigned* mask);
/* Positions along the shortest path; -1 when unreachable. */
ITR_API itr_status itr_layout_shortest_distance(const itr_layout* layout, int x0, int y0, int x1,
                                                int y1, int directed, int* out);

/* ---- circuits --------------------------------------------------------- */

typedef struct itr_circuit itr_circuit;

ITR_API itr_status itr_circuit_random(int qubit_count, uint64_t seed, itr_circuit** out);
ITR_API itr_status itr_circuit_from_json(const char* json, itr_circuit** out);
ITR_API void itr_circuit_destroy(itr_circuit* circuit);
ITR_API itr_status itr_circuit_json(const itr_circuit* circuit, char** out);
ITR_API itr_status itr_circuit_pair_count(const itr_circuit* circuit, int* out);
ITR_API itr_status itr_circuit_pair(const itr_circuit* circuit, int index, int* a, int* b);

/* ---- routing ---------------------------------------------------------- */

typedef enum { ITR_ENGINE_LANE = 0, ITR_ENGINE_SWAP = 1, ITR_ENGINE_LOWER_BOUND = 2 } itr_engine;

ITR_API itr_status itr_engine_from_string(const char* name, itr_engine* out);
ITR_API const char* itr_engine_name(itr_engine engine);

typedef struct {
  int density;
  double swap_penalty;
  int64_t step_cap; /* 0 selects 50 * R * M */
} itr_sim_config;

ITR_API void itr_sim_config_default(itr_sim_config* config);

typedef struct {
  int64_t steps_raw;
  double tau;
  double lower_bound_tau;
  double mean_passes;
  int max_passes;
  double mean_swaps;
  int64_t swap_events;
  int converged;
  int round_count;
  int64_t violations;
} itr_run_summary;

/* trace_path may be NULL; otherwise a JSON-lines move trace is written. */
ITR_API itr_status itr_simulate(const itr_layout* layout, const itr_circuit* circuit, itr_engine engine,
                                const itr_sim_config* config, const char* trace_path,
                                itr_run_summary* out);

/* ---- ensembles and fits ----------------------------------------------- */

typedef struct {
  int device_size;
  int resolution;
  int density;
  itr_engine engine;
  double swap_penalty;
  int iterations;
  uint64_t base_seed;
  int64_t step_cap;
  int jobs;
} itr_ensemble_params;

typedef struct {
  int qubit_count;
  int round_count;
  double mean_tau;
  double std_tau;
  double mean_lower_bound;
  double std_lower_bound;
  double mean_passes;
  double std_passes;
  int max_passes;
  double mean_swaps_per_qubit;
  double std_swaps_per_qubit;
  double mean_swap_events_per_qubit;
  int64_t failures;
  int64_t violations;
  int64_t below_lower_bound;
} itr_ensemble_summary;

typedef struct itr_ensemble itr_ensemble;

ITR_API void itr_ensemble_params_default(itr_ensemble_params* params);
ITR_API itr_status itr_ensemble_run(const itr_ensemble_params* params, itr_ensemble** out);
ITR_API void itr_ensemble_destroy(itr_ensemble* ensemble);
ITR_API itr_status itr_ensemble_summary_get(const itr_ensemble* ensemble, itr_ensemble_summary* out);
/* Fraction of ion observations with at least `threshold` junction passes. */
ITR_API itr_status itr_ensemble_pass_tail(const itr_ensemble* ensemble, int threshold, double* out);
ITR_API itr_status itr_ensemble_tau(const itr_ensemble* ensemble, int iteration, double* tau,
                                    double* lower_bound);
ITR_API const char* itr_ensemble_csv_header(void);
ITR_API itr_status itr_ensemble_csv_row(const itr_ensemble* ensemble, char** out);
ITR_API itr_status itr_ensemble_histogram_json(const itr_ensemble* const* ensembles, size_t count,
                                               char** out);

typedef struct {
  double slope;
  double intercept;
  double slope_se;
  double intercept_se;
  int points;
} itr_fit;

ITR_API itr_status itr_fit_linear(const double* x, const double* y, size_t count, itr_fit* out);

/* ---- error model ------------------------------------------------------ */

typedef struct {
  double epsilon_gate;
  double t_shuttle;
  double coherence_c;
  double x_loss;
  double t_combine;
  double t_separate;
} itr_error_params;

typedef enum {
  ITR_ARCH_ALL_TO_ALL = 0,
  ITR_ARCH_TRAPPED_ION = 1,
  ITR_ARCH_TRAPPED_ION_EMPIRICAL = 2,
  ITR_ARCH_SUPERCONDUCTING_GRID = 3
} itr_architecture;

typedef struct itr_cost_model itr_cost_model;

typedef struct {
  double qv;
  double sqrt_qv;
  int argmax_n;
  double depth;
  double epsilon_eff;
} itr_qv_result;

ITR_API void itr_error_params_default(itr_error_params* params);
ITR_API itr_status itr_error_params_from_json(const char* json, itr_error_params* out);
/* Any architecture except ITR_ARCH_TRAPPED_ION_EMPIRICAL. */
ITR_API itr_status itr_cost_model_create(itr_architecture arch, itr_cost_model** out);
ITR_API itr_status itr_cost_model_empirical(const int* qubit_counts, const double* tau,
                                            const double* passes, size_t count, itr_cost_model** out);
ITR_API void itr_cost_model_destroy(itr_cost_model* model);
ITR_API const char* itr_architecture_name(itr_architecture arch);
ITR_API itr_status itr_epsilon_deco(double t, double c, double* out);
ITR_API itr_status itr_epsilon_eff(const itr_error_params* params, int qubit_count,
                                   const itr_cost_model* model, double* out);
ITR_API itr_status itr_achievable_depth(int qubit_count, double epsilon_eff, double* out);
/* n_range may be NULL (even N from 2 to 2048). */
ITR_API itr_status itr_qv_native(const itr_error_params* params, const itr_cost_model* model,
                                 const int* n_range, size_t count, itr_qv_result* out);
ITR_API itr_status itr_qubits_for_sqrt_qv(double sqrt_qv, int* out);

/* ---- two-qubit decomposition ----------------------------------------- */

typedef struct {
  double re;
  double im;
} itr_complex;

typedef enum { ITR_GATE_RX = 0, ITR_GATE_RY = 1, ITR_GATE_MS = 2 } itr_gate_kind;

typedef struct {
  itr_gate_kind kind;
  int qubit; /* 0 or 1; -1 for MS */
  double angle;
} itr_gate;

typedef struct itr_decomposition itr_decomposition;

ITR_API itr_status itr_ms_matrix(double chi, itr_complex out[16]);
ITR_API itr_status itr_preset_unitary(const char* name, itr_complex out[16]);
ITR_API itr_status itr_haar_unitary(uint64_t seed, itr_complex out[16]);
ITR_API itr_status itr_matrix_from_json(const char* json, itr_complex out[16]);
ITR_API itr_status itr_phase_aligned_distance(const itr_complex a[16], const itr_complex b[16],
                                              double* out);
ITR_API itr_status itr_decompose(const itr_complex u[16], itr_decomposition** out);
ITR_API void itr_decomposition_destroy(itr_decomposition* d);
ITR_API itr_status itr_decomposition_counts(const itr_decomposition* d, int* total, int* ms,
                                            int* single_qubit);
ITR_API itr_status itr_decomposition_gate(const itr_decomposition* d, int index, itr_gate* out);
ITR_API itr_status itr_decomposition_global_phase(const itr_decomposition* d, double* out);
ITR_API itr_status itr_decomposition_evaluate(const itr_decomposition* d, itr_complex out[16]);
ITR_API itr_status itr_decomposition_residual(const itr_decomposition* d, double* out);
ITR_API itr_status itr_decomposition_json(const itr_decomposition* d, char** out);
ITR_API itr_status itr_decomposition_text(const itr_decomposition* d, char** out);

#ifdef __cplusplus
}
#endif

#endif /* IONTRAP_IONTRAP_H_ */
