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

#include <Eigen/Dense>

namespace iontrap {

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

// Qubit 0 is the first tensor factor: a gate g on qubit 0 acts as g (x) I.
// Rx(t) = exp(-i t X / 2), Ry(t) = exp(-i t Y / 2), MS(chi) = exp(-i chi X(x)X).
Matrix2 rx_matrix(double theta);
Matrix2 ry_matrix(double theta);
Matrix2 rz_matrix(double theta);
// Throws Error(kOutOfRange) unless |chi| <= pi/4.
Matrix4 ms_matrix(double chi);
Matrix4 kron(const Matrix2& a, const Matrix2& b);

enum class Axis : std::uint8_t { kX, kY, kZ };

// U = exp(i alpha) R_n(beta) R_m(gamma) R_n(delta), matrix product order, so
// R_n(delta) acts first.
struct AxisAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

// Euler angles about two distinct coordinate axes (default n = y, m = x).
// Angles beta, gamma, delta lie in (-pi, pi]. Throws Error(kNotUnitary) for
// non-unitary input and Error(kInvalidArgument) when n == m.
AxisAngles single_qubit_axis_decompose(const Matrix2& u, Axis n = Axis::kY, Axis m = Axis::kX);
Matrix2 axis_rotation(Axis axis, double theta);

enum class GateKind : std::uint8_t { kRx, kRy, kMs };

struct NativeGate {
  GateKind kind = GateKind::kRx;
  int qubit = 0;  // 0 or 1; ignored for MS
  double angle = 0.0;
};

// Gates in time order. evaluate_circuit multiplies them in and then applies
// exp(i global_phase).
struct NativeCircuit {
  std::vector<NativeGate> gates;
  double global_phase = 0.0;

  int ms_count() const;
  int single_qubit_count() const;
};

struct Decomposition {
  NativeCircuit circuit;
  // Canonical interaction coefficients: U ~ k1 exp(i(a XX + b YY + c ZZ)) k2,
  // each folded into (-pi/4, pi/4].
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int single_qubit_count_before_merge = 0;
  double residual = 0.0;
};

// Synthesises U into 3 MS gates and at most 18 Rx/Ry gates. Throws
// Error(kNotUnitary) for non-unitary input and Error(kInternal) if the
// result misses U by more than 1e-9.
Decomposition decompose_su4(const Matrix4& u);

Matrix4 evaluate_circuit(const NativeCircuit& c);

// Operator-norm distance min over phi of |u - exp(i phi) v|.
double phase_aligned_distance(const Matrix4& u, const Matrix4& v);
// max |(u u^dagger - I)_ij|.
double unitarity_error(const Matrix4& u);

// Merges every run of more than three single-qubit gates on a wire (between
// MS gates) into one Ry Rx Ry triple. Preserves the unitary including global
// phase.
NativeCircuit merge_single_qubit_runs(const NativeCircuit& c);

// "identity", "cnot" (control qubit 0), "swap", "iswap", "ms:<chi>".
Matrix4 preset_unitary(std::string_view name);
// Haar-random element of U(4) from a seeded Gaussian QR.
Matrix4 haar_random_unitary(std::uint64_t seed);

// 4x4 matrix as rows of entries; each entry a number or [re, im].
Matrix4 matrix_from_json(std::string_view text);
std::string matrix_to_json(const Matrix4& m);
std::string to_json(const Decomposition& d);
// One gate per line, e.g. "Ry(0.785398) q0" or "MS(-0.3)".
std::string to_text(const NativeCircuit& c);
const char* to_string(GateKind k);

}  // namespace iontrap
