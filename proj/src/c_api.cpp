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

#include "iontrap/iontrap.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "iontrap/decomp.hpp"
#include "iontrap/device.hpp"
#include "iontrap/error.hpp"
#include "iontrap/errormodel.hpp"
#include "iontrap/routing.hpp"
#include "iontrap/stats.hpp"
#include "iontrap/workload.hpp"

struct itr_layout {
  iontrap::DeviceLayout layout;
};

struct itr_circuit {
  iontrap::DepthOneCircuit circuit;
};

struct itr_ensemble {
  iontrap::EnsembleResult result;
};

struct itr_cost_model {
  iontrap::ConnectivityCostModel model;
};

struct itr_decomposition {
  iontrap::Decomposition d;
};

namespace {

thread_local std::string g_last_error;

itr_status set_error(itr_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

itr_status from_code(iontrap::ErrorCode code) {
  switch (code) {
    case iontrap::ErrorCode::kInvalidArgument: return ITR_INVALID_ARGUMENT;
    case iontrap::ErrorCode::kOutOfRange: return ITR_OUT_OF_RANGE;
    case iontrap::ErrorCode::kNotUnitary: return ITR_NOT_UNITARY;
    case iontrap::ErrorCode::kIo: return ITR_IO;
    case iontrap::ErrorCode::kInternal: return ITR_INTERNAL;
  }
  return ITR_INTERNAL;
}

// Runs `body`, mapping every exception onto a status code.
template <typename Body>
itr_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return ITR_OK;
  } catch (const iontrap::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ITR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ITR_INTERNAL, e.what());
  } catch (...) {
    return set_error(ITR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) iontrap::fail(iontrap::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

iontrap::Matrix4 to_matrix(const itr_complex* m) {
  iontrap::Matrix4 out;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) out(i, k) = {m[4 * i + k].re, m[4 * i + k].im};
  }
  return out;
}

void from_matrix(const iontrap::Matrix4& m, itr_complex* out) {
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) out[4 * i + k] = {m(i, k).real(), m(i, k).imag()};
  }
}

iontrap::Engine to_engine(itr_engine e) {
  switch (e) {
    case ITR_ENGINE_LANE: return iontrap::Engine::kLanePriority;
    case ITR_ENGINE_SWAP: return iontrap::Engine::kSwapBased;
    case ITR_ENGINE_LOWER_BOUND: return iontrap::Engine::kLowerBound;
  }
  iontrap::fail(iontrap::ErrorCode::kInvalidArgument, "unknown engine");
}

iontrap::ErrorModelParams to_params(const itr_error_params* p) {
  iontrap::ErrorModelParams out;
  out.epsilon_gate = p->epsilon_gate;
  out.t_shuttle = p->t_shuttle;
  out.coherence_c = p->coherence_c;
  out.x_loss = p->x_loss;
  out.t_combine = p->t_combine;
  out.t_separate = p->t_separate;
  return out;
}

}  // namespace

extern "C" {

const char* itr_version(void) { return "0.1.0"; }

const char* itr_last_error(void) { return g_last_error.c_str(); }

const char* itr_status_string(itr_status status) {
  switch (status) {
    case ITR_OK: return "ok";
    case ITR_INVALID_ARGUMENT: return "invalid argument";
    case ITR_OUT_OF_RANGE: return "out of range";
    case ITR_NOT_UNITARY: return "not unitary";
    case ITR_IO: return "i/o error";
    case ITR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void itr_string_free(char* s) { std::free(s); }

// ---- layout ---------------------------------------------------------------

itr_status itr_layout_create(int device_size, int resolution, itr_layout** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    *out = new itr_layout{iontrap::DeviceLayout(device_size, resolution)};
  });
}

void itr_layout_destroy(itr_layout* layout) { delete layout; }

itr_status itr_layout_counts(const itr_layout* layout, int* positions, int* interior_zones,
                             int* exterior_zones) {
  return guarded([&] {
    require(layout != nullptr, "null layout");
    if (positions) *positions = layout->layout.position_count();
    if (interior_zones) *interior_zones = layout->layout.interior_zone_count();
    if (exterior_zones) *exterior_zones = layout->layout.exterior_zone_count();
  });
}

itr_status itr_layout_json(const itr_layout* layout, char** out) {
  return guarded([&] {
    require(layout != nullptr && out != nullptr, "null argument");
    *out = copy_string(layout->layout.to_json());
  });
}

itr_status itr_layout_lane_direction(const itr_layout* layout, int x, int y, unsigned* mask) {
  return guarded([&] {
    require(layout != nullptr && mask != nullptr, "null argument");
    *mask = layout->layout.lane_direction({x, y});
  });
}

itr_status itr_layout_shortest_distance(const itr_layout* layout, int x0, int y0, int x1, int y1,
                                        int directed, int* out) {
  return guarded([&] {
    require(layout != nullptr && out != nullptr, "null argument");
    *out = iontrap::shortest_distance(layout->layout, iontrap::Coord{x0, y0}, iontrap::Coord{x1, y1},
                                      directed ? iontrap::Metric::kDirected : iontrap::Metric::kUndirected);
  });
}

// ---- circuits -------------------------------------------------------------

itr_status itr_circuit_random(int qubit_count, uint64_t seed, itr_circuit** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    *out = new itr_circuit{iontrap::random_matching(qubit_count, seed)};
  });
}

itr_status itr_circuit_from_json(const char* json, itr_circuit** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new itr_circuit{iontrap::circuit_from_json(json)};
  });
}

void itr_circuit_destroy(itr_circuit* circuit) { delete circuit; }

itr_status itr_circuit_json(const itr_circuit* circuit, char** out) {
  return guarded([&] {
    require(circuit != nullptr && out != nullptr, "null argument");
    *out = copy_string(iontrap::to_json(circuit->circuit));
  });
}

itr_status itr_circuit_pair_count(const itr_circuit* circuit, int* out) {
  return guarded([&] {
    require(circuit != nullptr && out != nullptr, "null argument");
    *out = static_cast<int>(circuit->circuit.pairs.size());
  });
}

itr_status itr_circuit_pair(const itr_circuit* circuit, int index, int* a, int* b) {
  return guarded([&] {
    require(circuit != nullptr && a != nullptr && b != nullptr, "null argument");
    if (index < 0 || index >= static_cast<int>(circuit->circuit.pairs.size())) {
      iontrap::fail(iontrap::ErrorCode::kOutOfRange, "pair index out of range");
    }
    *a = circuit->circuit.pairs[static_cast<std::size_t>(index)].a;
    *b = circuit->circuit.pairs[static_cast<std::size_t>(index)].b;
  });
}

// ---- routing --------------------------------------------------------------

itr_status itr_engine_from_string(const char* name, itr_engine* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    switch (iontrap::engine_from_string(name)) {
      case iontrap::Engine::kLanePriority: *out = ITR_ENGINE_LANE; break;
      case iontrap::Engine::kSwapBased: *out = ITR_ENGINE_SWAP; break;
      case iontrap::Engine::kLowerBound: *out = ITR_ENGINE_LOWER_BOUND; break;
    }
  });
}

const char* itr_engine_name(itr_engine engine) {
  switch (engine) {
    case ITR_ENGINE_LANE: return "lane";
    case ITR_ENGINE_SWAP: return "swap";
    case ITR_ENGINE_LOWER_BOUND: return "lower-bound";
  }
  return "unknown";
}

void itr_sim_config_default(itr_sim_config* config) {
  if (config == nullptr) return;
  const iontrap::RoutingConfig d;
  config->density = d.density;
  config->swap_penalty = d.swap_penalty;
  config->step_cap = d.step_cap;
}

itr_status itr_simulate(const itr_layout* layout, const itr_circuit* circuit, itr_engine engine,
                        const itr_sim_config* config, const char* trace_path, itr_run_summary* out) {
  return guarded([&] {
    require(layout != nullptr && circuit != nullptr && out != nullptr, "null argument");
    iontrap::RoutingConfig cfg;
    if (config != nullptr) {
      cfg.density = config->density;
      cfg.swap_penalty = config->swap_penalty;
      cfg.step_cap = static_cast<long>(config->step_cap);
    }
    std::ofstream trace;
    if (trace_path != nullptr) {
      trace.open(trace_path);
      if (!trace) iontrap::fail(iontrap::ErrorCode::kIo, std::string("cannot open ") + trace_path);
      cfg.trace = &trace;
    }
    const iontrap::RoutingContext ctx(layout->layout);
    const iontrap::RoutingRun run = iontrap::run_engine(to_engine(engine), ctx, circuit->circuit, cfg);
    if (trace_path != nullptr) {
      trace.flush();
      if (!trace) iontrap::fail(iontrap::ErrorCode::kIo, std::string("cannot write ") + trace_path);
    }
    itr_run_summary s{};
    s.steps_raw = run.steps_raw;
    s.tau = run.tau;
    s.lower_bound_tau = run.lower_bound_tau;
    double passes = 0.0;
    double swaps = 0.0;
    for (std::size_t q = 0; q < run.junction_passes.size(); ++q) {
      passes += run.junction_passes[q];
      swaps += run.swaps[q];
      s.max_passes = std::max(s.max_passes, run.junction_passes[q]);
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, run.junction_passes.size()));
    s.mean_passes = passes / n;
    s.mean_swaps = swaps / n;
    s.swap_events = run.swap_events;
    s.converged = run.converged ? 1 : 0;
    s.round_count = run.round_count;
    s.violations = run.violations;
    *out = s;
  });
}

// ---- ensembles ------------------------------------------------------------

void itr_ensemble_params_default(itr_ensemble_params* params) {
  if (params == nullptr) return;
  const iontrap::EnsembleParams d;
  params->device_size = d.device_size;
  params->resolution = d.resolution;
  params->density = d.density;
  params->engine = ITR_ENGINE_LANE;
  params->swap_penalty = d.swap_penalty;
  params->iterations = d.iterations;
  params->base_seed = d.base_seed;
  params->step_cap = d.step_cap;
  params->jobs = d.jobs;
}

itr_status itr_ensemble_run(const itr_ensemble_params* params, itr_ensemble** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    iontrap::EnsembleParams p;
    p.device_size = params->device_size;
    p.resolution = params->resolution;
    p.density = params->density;
    p.engine = to_engine(params->engine);
    p.swap_penalty = params->swap_penalty;
    p.iterations = params->iterations;
    p.base_seed = params->base_seed;
    p.step_cap = static_cast<long>(params->step_cap);
    p.jobs = params->jobs;
    *out = new itr_ensemble{iontrap::run_ensemble(p)};
  });
}

void itr_ensemble_destroy(itr_ensemble* ensemble) { delete ensemble; }

itr_status itr_ensemble_summary_get(const itr_ensemble* ensemble, itr_ensemble_summary* out) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "null argument");
    const iontrap::EnsembleResult& r = ensemble->result;
    out->qubit_count = r.qubit_count;
    out->round_count = r.round_count;
    out->mean_tau = r.mean_tau;
    out->std_tau = r.std_tau;
    out->mean_lower_bound = r.mean_lower_bound;
    out->std_lower_bound = r.std_lower_bound;
    out->mean_passes = r.mean_passes;
    out->std_passes = r.std_passes;
    out->max_passes = r.max_passes;
    out->mean_swaps_per_qubit = r.mean_swaps_per_qubit;
    out->std_swaps_per_qubit = r.std_swaps_per_qubit;
    out->mean_swap_events_per_qubit = r.mean_swap_events_per_qubit;
    out->failures = r.failures;
    out->violations = r.violations;
    out->below_lower_bound = r.below_lower_bound;
  });
}

itr_status itr_ensemble_pass_tail(const itr_ensemble* ensemble, int threshold, double* out) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "null argument");
    *out = ensemble->result.histogram.tail_fraction(threshold);
  });
}

itr_status itr_ensemble_tau(const itr_ensemble* ensemble, int iteration, double* tau, double* lower_bound) {
  return guarded([&] {
    require(ensemble != nullptr, "null ensemble");
    const auto& taus = ensemble->result.taus;
    if (iteration < 0 || iteration >= static_cast<int>(taus.size())) {
      iontrap::fail(iontrap::ErrorCode::kOutOfRange, "iteration index out of range");
    }
    if (tau) *tau = taus[static_cast<std::size_t>(iteration)];
    if (lower_bound) *lower_bound = ensemble->result.lower_bounds[static_cast<std::size_t>(iteration)];
  });
}

const char* itr_ensemble_csv_header(void) {
  static const std::string header = iontrap::csv_header();
  return header.c_str();
}

itr_status itr_ensemble_csv_row(const itr_ensemble* ensemble, char** out) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "null argument");
    *out = copy_string(iontrap::csv_row(ensemble->result));
  });
}

itr_status itr_ensemble_histogram_json(const itr_ensemble* const* ensembles, size_t count, char** out) {
  return guarded([&] {
    require(out != nullptr && (ensembles != nullptr || count == 0), "null argument");
    std::vector<iontrap::EnsembleResult> all;
    for (size_t i = 0; i < count; ++i) {
      require(ensembles[i] != nullptr, "null ensemble in list");
      all.push_back(ensembles[i]->result);
    }
    *out = copy_string(iontrap::histogram_json(all));
  });
}

itr_status itr_fit_linear(const double* x, const double* y, size_t count, itr_fit* out) {
  return guarded([&] {
    require(x != nullptr && y != nullptr && out != nullptr, "null argument");
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < count; ++i) pts.emplace_back(x[i], y[i]);
    const iontrap::FitResult f = iontrap::fit_linear(pts);
    *out = {f.slope, f.intercept, f.slope_se, f.intercept_se, f.points};
  });
}

// ---- error model ----------------------------------------------------------

void itr_error_params_default(itr_error_params* params) {
  if (params == nullptr) return;
  const iontrap::ErrorModelParams d;
  *params = {d.epsilon_gate, d.t_shuttle, d.coherence_c, d.x_loss, d.t_combine, d.t_separate};
}

itr_status itr_error_params_from_json(const char* json, itr_error_params* out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    const iontrap::ErrorModelParams p = iontrap::error_params_from_json(json);
    *out = {p.epsilon_gate, p.t_shuttle, p.coherence_c, p.x_loss, p.t_combine, p.t_separate};
  });
}

itr_status itr_cost_model_create(itr_architecture arch, itr_cost_model** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    switch (arch) {
      case ITR_ARCH_ALL_TO_ALL:
        *out = new itr_cost_model{iontrap::ConnectivityCostModel::all_to_all()};
        break;
      case ITR_ARCH_TRAPPED_ION:
        *out = new itr_cost_model{iontrap::ConnectivityCostModel::trapped_ion_analytic()};
        break;
      case ITR_ARCH_SUPERCONDUCTING_GRID:
        *out = new itr_cost_model{iontrap::ConnectivityCostModel::superconducting_grid()};
        break;
      default:
        iontrap::fail(iontrap::ErrorCode::kInvalidArgument,
                      "use itr_cost_model_empirical for measured trapped-ion data");
    }
  });
}

itr_status itr_cost_model_empirical(const int* qubit_counts, const double* tau, const double* passes,
                                    size_t count, itr_cost_model** out) {
  return guarded([&] {
    require(out != nullptr && qubit_counts != nullptr && tau != nullptr && passes != nullptr,
            "null argument");
    *out = nullptr;
    std::vector<iontrap::EmpiricalPoint> pts;
    for (size_t i = 0; i < count; ++i) pts.push_back({qubit_counts[i], tau[i], passes[i]});
    *out = new itr_cost_model{iontrap::ConnectivityCostModel::trapped_ion_empirical(std::move(pts))};
  });
}

void itr_cost_model_destroy(itr_cost_model* model) { delete model; }

const char* itr_architecture_name(itr_architecture arch) {
  switch (arch) {
    case ITR_ARCH_ALL_TO_ALL: return iontrap::to_string(iontrap::Architecture::kAllToAll);
    case ITR_ARCH_TRAPPED_ION: return iontrap::to_string(iontrap::Architecture::kTrappedIonAnalytic);
    case ITR_ARCH_TRAPPED_ION_EMPIRICAL:
      return iontrap::to_string(iontrap::Architecture::kTrappedIonEmpirical);
    case ITR_ARCH_SUPERCONDUCTING_GRID:
      return iontrap::to_string(iontrap::Architecture::kSuperconductingGrid);
  }
  return "unknown";
}

itr_status itr_epsilon_deco(double t, double c, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = iontrap::epsilon_deco(t, c);
  });
}

itr_status itr_epsilon_eff(const itr_error_params* params, int qubit_count, const itr_cost_model* model,
                           double* out) {
  return guarded([&] {
    require(params != nullptr && model != nullptr && out != nullptr, "null argument");
    *out = iontrap::epsilon_eff(to_params(params), qubit_count, model->model);
  });
}

itr_status itr_achievable_depth(int qubit_count, double epsilon_eff, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = iontrap::achievable_depth(qubit_count, epsilon_eff);
  });
}

itr_status itr_qv_native(const itr_error_params* params, const itr_cost_model* model, const int* n_range,
                         size_t count, itr_qv_result* out) {
  return guarded([&] {
    require(params != nullptr && model != nullptr && out != nullptr, "null argument");
    const std::vector<int> range =
        n_range == nullptr ? iontrap::default_n_range() : std::vector<int>(n_range, n_range + count);
    const iontrap::QvResult r = iontrap::qv_native(to_params(params), model->model, range);
    *out = {r.qv, r.sqrt_qv, r.argmax_n, r.depth, r.epsilon_eff};
  });
}

itr_status itr_qubits_for_sqrt_qv(double sqrt_qv, int* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = iontrap::qubits_for_sqrt_qv(sqrt_qv);
  });
}

// ---- decomposition --------------------------------------------------------

itr_status itr_ms_matrix(double chi, itr_complex out[16]) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    from_matrix(iontrap::ms_matrix(chi), out);
  });
}

itr_status itr_preset_unitary(const char* name, itr_complex out[16]) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    from_matrix(iontrap::preset_unitary(name), out);
  });
}

itr_status itr_haar_unitary(uint64_t seed, itr_complex out[16]) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    from_matrix(iontrap::haar_random_unitary(seed), out);
  });
}

itr_status itr_matrix_from_json(const char* json, itr_complex out[16]) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    from_matrix(iontrap::matrix_from_json(json), out);
  });
}

itr_status itr_phase_aligned_distance(const itr_complex a[16], const itr_complex b[16], double* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = iontrap::phase_aligned_distance(to_matrix(a), to_matrix(b));
  });
}

itr_status itr_decompose(const itr_complex u[16], itr_decomposition** out) {
  return guarded([&] {
    require(u != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new itr_decomposition{iontrap::decompose_su4(to_matrix(u))};
  });
}

void itr_decomposition_destroy(itr_decomposition* d) { delete d; }

itr_status itr_decomposition_counts(const itr_decomposition* d, int* total, int* ms, int* single_qubit) {
  return guarded([&] {
    require(d != nullptr, "null decomposition");
    if (total) *total = static_cast<int>(d->d.circuit.gates.size());
    if (ms) *ms = d->d.circuit.ms_count();
    if (single_qubit) *single_qubit = d->d.circuit.single_qubit_count();
  });
}

itr_status itr_decomposition_gate(const itr_decomposition* d, int index, itr_gate* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    const auto& gates = d->d.circuit.gates;
    if (index < 0 || index >= static_cast<int>(gates.size())) {
      iontrap::fail(iontrap::ErrorCode::kOutOfRange, "gate index out of range");
    }
    const iontrap::NativeGate& g = gates[static_cast<std::size_t>(index)];
    switch (g.kind) {
      case iontrap::GateKind::kRx: *out = {ITR_GATE_RX, g.qubit, g.angle}; break;
      case iontrap::GateKind::kRy: *out = {ITR_GATE_RY, g.qubit, g.angle}; break;
      case iontrap::GateKind::kMs: *out = {ITR_GATE_MS, -1, g.angle}; break;
    }
  });
}

itr_status itr_decomposition_global_phase(const itr_decomposition* d, double* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = d->d.circuit.global_phase;
  });
}

itr_status itr_decomposition_evaluate(const itr_decomposition* d, itr_complex out[16]) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    from_matrix(iontrap::evaluate_circuit(d->d.circuit), out);
  });
}

itr_status itr_decomposition_residual(const itr_decomposition* d, double* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = d->d.residual;
  });
}

itr_status itr_decomposition_json(const itr_decomposition* d, char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = copy_string(iontrap::to_json(d->d));
  });
}

itr_status itr_decomposition_text(const itr_decomposition* d, char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = copy_string(iontrap::to_text(d->d.circuit));
  });
}

}  // extern "C"
