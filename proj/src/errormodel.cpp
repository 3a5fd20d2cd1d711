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

#include "iontrap/errormodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iontrap/error.hpp"
#include "json.hpp"

namespace iontrap {

void ErrorModelParams::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kInvalidArgument, what);
  };
  check(epsilon_gate >= 0.0 && epsilon_gate <= 1.0, "epsilon_gate must lie in [0, 1]");
  check(x_loss >= 0.0 && x_loss <= 1.0, "x_loss must lie in [0, 1]");
  check(t_shuttle >= 0.0, "t_shuttle must be non-negative");
  check(t_combine >= 0.0, "t_combine must be non-negative");
  check(t_separate >= 0.0, "t_separate must be non-negative");
  check(coherence_c > 0.0, "coherence_c must be positive");
}

ErrorModelParams error_params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("error-model params: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "error-model params must be a JSON object");
  ErrorModelParams p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) {
      fail(ErrorCode::kInvalidArgument, "error-model field '" + it.key() + "' must be a number");
    }
    const double v = it.value().get<double>();
    if (it.key() == "epsilon_gate") {
      p.epsilon_gate = v;
    } else if (it.key() == "t_shuttle") {
      p.t_shuttle = v;
    } else if (it.key() == "coherence_c") {
      p.coherence_c = v;
    } else if (it.key() == "x_loss") {
      p.x_loss = v;
    } else if (it.key() == "t_combine") {
      p.t_combine = v;
    } else if (it.key() == "t_separate") {
      p.t_separate = v;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown error-model field '" + it.key() + "'");
    }
  }
  p.validate();
  return p;
}

std::string to_json(const ErrorModelParams& p) {
  return nlohmann::json{{"epsilon_gate", p.epsilon_gate}, {"t_shuttle", p.t_shuttle},
                        {"coherence_c", p.coherence_c},   {"x_loss", p.x_loss},
                        {"t_combine", p.t_combine},       {"t_separate", p.t_separate}}
      .dump();
}

const char* to_string(Architecture a) {
  switch (a) {
    case Architecture::kAllToAll: return "all_to_all";
    case Architecture::kTrappedIonAnalytic: return "trapped_ion";
    case Architecture::kTrappedIonEmpirical: return "trapped_ion_empirical";
    case Architecture::kSuperconductingGrid: return "superconducting_grid";
  }
  return "?";
}

ConnectivityCostModel ConnectivityCostModel::all_to_all() {
  return ConnectivityCostModel(Architecture::kAllToAll);
}

ConnectivityCostModel ConnectivityCostModel::trapped_ion_analytic() {
  return ConnectivityCostModel(Architecture::kTrappedIonAnalytic);
}

ConnectivityCostModel ConnectivityCostModel::trapped_ion_empirical(std::vector<EmpiricalPoint> points) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "empirical cost model needs data points");
  std::sort(points.begin(), points.end(),
            [](const EmpiricalPoint& a, const EmpiricalPoint& b) { return a.qubit_count < b.qubit_count; });
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].qubit_count < 2 || points[i].tau < 0.0 || points[i].passes < 0.0) {
      fail(ErrorCode::kInvalidArgument, "empirical points need N >= 2 and non-negative values");
    }
    if (i > 0 && points[i].qubit_count == points[i - 1].qubit_count) {
      fail(ErrorCode::kInvalidArgument, "duplicate qubit count in empirical points");
    }
  }
  ConnectivityCostModel m(Architecture::kTrappedIonEmpirical);
  m.points_ = std::move(points);
  return m;
}

ConnectivityCostModel ConnectivityCostModel::superconducting_grid() {
  return ConnectivityCostModel(Architecture::kSuperconductingGrid);
}

bool ConnectivityCostModel::supports(int n) const {
  if (n < 2) return false;
  if (arch_ != Architecture::kTrappedIonEmpirical) return true;
  return n >= points_.front().qubit_count && n <= points_.back().qubit_count;
}

double ConnectivityCostModel::interpolate(int n, bool want_tau) const {
  if (!supports(n)) {
    fail(ErrorCode::kOutOfRange, "N=" + std::to_string(n) + " lies outside the measured span");
  }
  auto value = [&](const EmpiricalPoint& p) { return want_tau ? p.tau : p.passes; };
  const auto hi = std::lower_bound(points_.begin(), points_.end(), n,
                                   [](const EmpiricalPoint& p, int q) { return p.qubit_count < q; });
  if (hi->qubit_count == n) return value(*hi);
  const auto lo = hi - 1;
  const double x0 = std::sqrt(static_cast<double>(lo->qubit_count));
  const double x1 = std::sqrt(static_cast<double>(hi->qubit_count));
  const double w = (std::sqrt(static_cast<double>(n)) - x0) / (x1 - x0);
  return value(*lo) + w * (value(*hi) - value(*lo));
}

double ConnectivityCostModel::tau(int n) const {
  switch (arch_) {
    case Architecture::kTrappedIonAnalytic: return 1.3 * std::sqrt(static_cast<double>(n)) + 2.0;
    case Architecture::kTrappedIonEmpirical: return interpolate(n, true);
    default: return 0.0;
  }
}

double ConnectivityCostModel::x_count(int n) const {
  switch (arch_) {
    case Architecture::kTrappedIonAnalytic: return 0.4 * std::sqrt(static_cast<double>(n)) + 2.0;
    case Architecture::kTrappedIonEmpirical: return interpolate(n, false);
    default: return 0.0;
  }
}

double ConnectivityCostModel::depth_overhead(int n) const {
  if (arch_ != Architecture::kSuperconductingGrid) return 1.0;
  return std::max(1.0, 2.77 * std::sqrt(static_cast<double>(n)) - 4.53);
}

double epsilon_deco(double t, double c) {
  if (!(c > 0.0)) fail(ErrorCode::kInvalidArgument, "coherence time must be positive");
  if (t < 0.0) fail(ErrorCode::kInvalidArgument, "time must be non-negative");
  return -std::expm1(-t / c);
}

namespace {

void check_qubits(int n) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 qubits, got " + std::to_string(n));
}

}  // namespace

double epsilon_eff_trapped_ion(const ErrorModelParams& p, int n, const ConnectivityCostModel& model) {
  p.validate();
  check_qubits(n);
  if (n % 2 != 0) fail(ErrorCode::kInvalidArgument, "qubit count must be even");
  if (model.architecture() != Architecture::kTrappedIonAnalytic &&
      model.architecture() != Architecture::kTrappedIonEmpirical) {
    fail(ErrorCode::kInvalidArgument, "not a trapped-ion cost model");
  }
  if (!model.supports(n)) {
    fail(ErrorCode::kOutOfRange, "N=" + std::to_string(n) + " is outside the cost model's support");
  }
  const double t = model.tau(n) * p.t_shuttle + p.t_combine + p.t_separate;
  return p.epsilon_gate + epsilon_deco(t, p.coherence_c) + model.x_count(n) * p.x_loss;
}

double epsilon_eff_superconducting(double epsilon_gate, int n) {
  check_qubits(n);
  if (epsilon_gate < 0.0) fail(ErrorCode::kInvalidArgument, "gate error must be non-negative");
  return epsilon_gate * ConnectivityCostModel::superconducting_grid().depth_overhead(n);
}

double epsilon_eff(const ErrorModelParams& p, int n, const ConnectivityCostModel& model) {
  switch (model.architecture()) {
    case Architecture::kAllToAll:
      p.validate();
      check_qubits(n);
      return p.epsilon_gate;
    case Architecture::kSuperconductingGrid:
      p.validate();
      return epsilon_eff_superconducting(p.epsilon_gate, n);
    default:
      return epsilon_eff_trapped_ion(p, n, model);
  }
}

double achievable_depth(int n, double epsilon_eff) {
  check_qubits(n);
  if (epsilon_eff < 0.0) fail(ErrorCode::kInvalidArgument, "effective error must be non-negative");
  if (epsilon_eff == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (static_cast<double>(n) * epsilon_eff);
}

QvResult qv_native(const ErrorModelParams& p, const ConnectivityCostModel& model,
                   const std::vector<int>& n_range) {
  if (n_range.empty()) fail(ErrorCode::kInvalidArgument, "empty qubit-count range");
  QvResult best;
  bool found = false;
  for (int n : n_range) {
    if (n < 2 || n % 2 != 0) fail(ErrorCode::kInvalidArgument, "qubit counts must be even and >= 2");
    if (!model.supports(n)) continue;
    const double eps = epsilon_eff(p, n, model);
    const double depth = achievable_depth(n, eps);
    const double side = std::min(static_cast<double>(n), depth);
    const double qv = side * side;
    if (!found || qv > best.qv || (qv == best.qv && n < best.argmax_n)) {
      best = {qv, side, n, depth, eps};
      found = true;
    }
  }
  if (!found) fail(ErrorCode::kOutOfRange, "no qubit count in the range is supported by the model");
  return best;
}

std::vector<int> default_n_range() {
  std::vector<int> out;
  for (int n = 2; n <= 2048; n += 2) out.push_back(n);
  return out;
}

int qubits_for_sqrt_qv(double sqrt_qv) {
  if (!(sqrt_qv >= 0.0) || !std::isfinite(sqrt_qv)) {
    fail(ErrorCode::kInvalidArgument, "sqrt(QV) must be finite and non-negative");
  }
  const auto up = static_cast<int>(std::ceil(sqrt_qv - 1e-12));
  return std::max(2, up + (up % 2));
}

}  // namespace iontrap
