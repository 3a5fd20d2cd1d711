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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

// Experimental inputs to the effective-error model. Times in seconds.
struct ErrorModelParams {
  double epsilon_gate = 1e-3;   // two-qubit gate error
  double t_shuttle = 114e-6;    // one junction-to-junction shuttle
  double coherence_c = 2.13;
  double x_loss = 1e-5;         // ion loss probability per junction pass
  double t_combine = 80e-6;
  double t_separate = 80e-6;

  // Throws Error(kInvalidArgument) on negative times, c <= 0, or a
  // probability outside [0, 1].
  void validate() const;
};

// Field names as in the struct; unknown keys are rejected. Missing keys keep
// their defaults.
ErrorModelParams error_params_from_json(std::string_view text);
std::string to_json(const ErrorModelParams& p);

enum class Architecture : std::uint8_t {
  kAllToAll,
  kTrappedIonAnalytic,
  kTrappedIonEmpirical,
  kSuperconductingGrid,
};

const char* to_string(Architecture a);

// One measured ensemble point for the empirical trapped-ion model.
struct EmpiricalPoint {
  int qubit_count = 0;
  double tau = 0.0;
  double passes = 0.0;
};

// How an architecture pays for connectivity as a function of qubit count.
class ConnectivityCostModel {
 public:
  static ConnectivityCostModel all_to_all();
  // tau(N) = 1.3 sqrt(N) + 2, X_count(N) = 0.4 sqrt(N) + 2.
  static ConnectivityCostModel trapped_ion_analytic();
  // Piecewise-linear in sqrt(N) through the given points; N outside the
  // measured span is unsupported. Needs at least one point.
  static ConnectivityCostModel trapped_ion_empirical(std::vector<EmpiricalPoint> points);
  // Depth overhead d(N) = max(1, 2.77 sqrt(N) - 4.53).
  static ConnectivityCostModel superconducting_grid();

  Architecture architecture() const { return arch_; }
  bool supports(int n) const;
  // Shuttle time in junction units per depth-1 layer (trapped ion only).
  double tau(int n) const;
  // Mean junction passes per ion per depth-1 layer (trapped ion only).
  double x_count(int n) const;
  // Native-gate layers per logical layer (superconducting only, else 1).
  double depth_overhead(int n) const;

 private:
  explicit ConnectivityCostModel(Architecture a) : arch_(a) {}
  double interpolate(int n, bool want_tau) const;

  Architecture arch_;
  std::vector<EmpiricalPoint> points_;
};

// 1 - exp(-t/c). Throws for c <= 0 or t < 0.
double epsilon_deco(double t, double c);

// epsilon_gate + epsilon_deco(tau(N) t_shuttle + t_combine + t_separate, c)
// + X_count(N) x_loss. Throws for odd or small N, or N the model does not
// support.
double epsilon_eff_trapped_ion(const ErrorModelParams& p, int n, const ConnectivityCostModel& model);

// epsilon_gate * max(1, 2.77 sqrt(N) - 4.53).
double epsilon_eff_superconducting(double epsilon_gate, int n);

// Dispatch on the model's architecture. All-to-all returns epsilon_gate.
double epsilon_eff(const ErrorModelParams& p, int n, const ConnectivityCostModel& model);

// 1 / (N epsilon_eff); +infinity when epsilon_eff is 0.
double achievable_depth(int n, double epsilon_eff);

struct QvResult {
  double qv = 0.0;
  double sqrt_qv = 0.0;
  int argmax_n = 0;
  double depth = 0.0;
  double epsilon_eff = 0.0;
};

// max over N of min(N, D(N))^2. N values the model does not support are
// skipped; ties go to the smallest N so the answer is independent of the
// order of n_range. Throws when n_range has no usable entry.
QvResult qv_native(const ErrorModelParams& p, const ConnectivityCostModel& model,
                   const std::vector<int>& n_range);

// Even N from 2 to 2048.
std::vector<int> default_n_range();

// Qubits used to realise a given sqrt(QV): rounded up to an even integer.
int qubits_for_sqrt_qv(double sqrt_qv);

}  // namespace iontrap
