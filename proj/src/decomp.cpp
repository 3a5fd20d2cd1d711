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

#include "iontrap/decomp.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include <Eigen/Geometry>

#include "iontrap/error.hpp"
#include "iontrap/workload.hpp"
#include "json.hpp"

namespace iontrap {

namespace {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr cd kI{0.0, 1.0};

Matrix2 pauli(Axis a) {
  Matrix2 m;
  switch (a) {
    case Axis::kX: m << 0, 1, 1, 0; break;
    case Axis::kY: m << 0, -kI, kI, 0; break;
    case Axis::kZ: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Vector3d unit(Axis a) {
  switch (a) {
    case Axis::kX: return Eigen::Vector3d::UnitX();
    case Axis::kY: return Eigen::Vector3d::UnitY();
    case Axis::kZ: return Eigen::Vector3d::UnitZ();
  }
  return Eigen::Vector3d::Zero();
}

// Into (-pi, pi].
double wrap(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}

double unitarity_error2(const Matrix2& u) {
  return (u * u.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

// SU(2) element whose conjugation rotates the Pauli vector by `r`.
Matrix2 su2_of_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  return q.w() * Matrix2::Identity() -
         kI * (q.x() * pauli(Axis::kX) + q.y() * pauli(Axis::kY) + q.z() * pauli(Axis::kZ));
}

// Columns are the magic (phased Bell) basis. Local SU(2) x SU(2) becomes real
// SO(4) there, and XX, YY, ZZ become diagonal.
Matrix4 magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix4 m;
  m << s, kI * s, 0, 0,
       0, 0, kI * s, s,
       0, 0, kI * s, -s,
       s, -kI * s, 0, 0;
  return m;
}

// Split a tensor product k = a (x) b with b in SU(2).
std::pair<Matrix2, Matrix2> kron_factor(const Matrix4& k) {
  int bi = 0;
  int bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double n = k.block<2, 2>(2 * i, 2 * j).norm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  }
  Matrix2 b = k.block<2, 2>(2 * bi, 2 * bj);
  b /= std::sqrt(b.determinant());
  Matrix2 a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = (k.block<2, 2>(2 * i, 2 * j) * b.adjoint()).trace() / 2.0;
  }
  return {a, b};
}

Matrix2 single_gate(const NativeGate& g) {
  return g.kind == GateKind::kRx ? rx_matrix(g.angle) : ry_matrix(g.angle);
}

Matrix4 embed(const Matrix2& g, int qubit) {
  return qubit == 0 ? kron(g, Matrix2::Identity()) : kron(Matrix2::Identity(), g);
}

// Appends u as Ry(delta) Rx(gamma) Ry(beta) in time order; returns alpha.
double append_yxy(std::vector<NativeGate>& out, const Matrix2& u, int qubit) {
  const AxisAngles e = single_qubit_axis_decompose(u, Axis::kY, Axis::kX);
  out.push_back({GateKind::kRy, qubit, e.delta});
  out.push_back({GateKind::kRx, qubit, e.gamma});
  out.push_back({GateKind::kRy, qubit, e.beta});
  return e.alpha;
}

double phase_between(const Matrix4& target, const Matrix4& v) {
  return std::arg((v.adjoint() * target).trace());
}

}  // namespace

Matrix2 rx_matrix(double t) {
  Matrix2 m;
  m << std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2);
  return m;
}

Matrix2 ry_matrix(double t) {
  Matrix2 m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

Matrix2 rz_matrix(double t) {
  Matrix2 m;
  m << std::exp(-kI * (t / 2)), 0, 0, std::exp(kI * (t / 2));
  return m;
}

Matrix2 axis_rotation(Axis axis, double theta) {
  switch (axis) {
    case Axis::kX: return rx_matrix(theta);
    case Axis::kY: return ry_matrix(theta);
    case Axis::kZ: return rz_matrix(theta);
  }
  return Matrix2::Identity();
}

Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return m;
}

Matrix4 ms_matrix(double chi) {
  if (!(std::abs(chi) <= kPi / 4 + 1e-12)) {
    fail(ErrorCode::kOutOfRange, "MS angle must lie in [-pi/4, pi/4]");
  }
  const cd c = std::cos(chi);
  const cd s = -kI * std::sin(chi);
  Matrix4 m;
  m << c, 0, 0, s,
       0, c, s, 0,
       0, s, c, 0,
       s, 0, 0, c;
  return m;
}

AxisAngles single_qubit_axis_decompose(const Matrix2& u, Axis n, Axis m) {
  if (n == m) fail(ErrorCode::kInvalidArgument, "rotation axes must differ");
  if (!u.allFinite() || unitarity_error2(u) > 1e-8) {
    fail(ErrorCode::kNotUnitary, "single-qubit input is not unitary");
  }
  // Rotate the frame so n becomes z and m becomes y; then it is a plain
  // ZYZ problem. The third axis goes where a right-handed frame puts it.
  Eigen::Matrix3d r;
  r.col(2) = unit(n);
  r.col(1) = unit(m);
  r.col(0) = unit(m).cross(unit(n));
  const Matrix2 v = su2_of_rotation(r);
  Matrix2 w = v.adjoint() * u * v;
  w /= std::sqrt(w.determinant());

  const cd a = w(0, 0);
  const cd b = w(1, 0);
  AxisAngles out;
  out.gamma = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double tol = 1e-12;
  if (std::abs(b) < tol) {
    out.beta = -2.0 * std::arg(a);
  } else if (std::abs(a) < tol) {
    out.beta = 2.0 * std::arg(b);
  } else {
    const double sum = -2.0 * std::arg(a);
    const double diff = 2.0 * std::arg(b);
    out.beta = (sum + diff) / 2.0;
    out.delta = (sum - diff) / 2.0;
  }
  out.beta = wrap(out.beta);
  out.gamma = wrap(out.gamma);
  out.delta = wrap(out.delta);
  const Matrix2 rebuilt =
      axis_rotation(n, out.beta) * axis_rotation(m, out.gamma) * axis_rotation(n, out.delta);
  out.alpha = std::arg((rebuilt.adjoint() * u).trace());
  return out;
}

int NativeCircuit::ms_count() const {
  int k = 0;
  for (const NativeGate& g : gates) k += g.kind == GateKind::kMs ? 1 : 0;
  return k;
}

int NativeCircuit::single_qubit_count() const {
  return static_cast<int>(gates.size()) - ms_count();
}

Matrix4 evaluate_circuit(const NativeCircuit& c) {
  Matrix4 u = Matrix4::Identity();
  for (const NativeGate& g : c.gates) {
    if (g.kind == GateKind::kMs) {
      u = ms_matrix(g.angle) * u;
    } else {
      if (g.qubit != 0 && g.qubit != 1) fail(ErrorCode::kInvalidArgument, "gate qubit must be 0 or 1");
      u = embed(single_gate(g), g.qubit) * u;
    }
  }
  return std::exp(kI * c.global_phase) * u;
}

double phase_aligned_distance(const Matrix4& u, const Matrix4& v) {
  const cd t = (v.adjoint() * u).trace();
  const cd phase = std::abs(t) > 0.0 ? t / std::abs(t) : cd(1.0);
  const Matrix4 diff = u - phase * v;
  Eigen::JacobiSVD<Matrix4> svd(diff);
  return svd.singularValues()(0);
}

double unitarity_error(const Matrix4& u) {
  return (u * u.adjoint() - Matrix4::Identity()).cwiseAbs().maxCoeff();
}

NativeCircuit merge_single_qubit_runs(const NativeCircuit& c) {
  NativeCircuit out;
  out.global_phase = c.global_phase;
  std::array<std::vector<NativeGate>, 2> run;
  auto flush = [&] {
    for (int q = 0; q < 2; ++q) {
      std::vector<NativeGate>& r = run[static_cast<std::size_t>(q)];
      if (r.size() > 3) {
        Matrix2 prod = Matrix2::Identity();
        for (const NativeGate& g : r) prod = single_gate(g) * prod;
        out.global_phase += append_yxy(out.gates, prod, q);
      } else {
        out.gates.insert(out.gates.end(), r.begin(), r.end());
      }
      r.clear();
    }
  };
  for (const NativeGate& g : c.gates) {
    if (g.kind == GateKind::kMs) {
      flush();
      out.gates.push_back(g);
    } else {
      if (g.qubit != 0 && g.qubit != 1) fail(ErrorCode::kInvalidArgument, "gate qubit must be 0 or 1");
      run[static_cast<std::size_t>(g.qubit)].push_back(g);
    }
  }
  flush();
  out.global_phase = wrap(out.global_phase);
  return out;
}

Decomposition decompose_su4(const Matrix4& u) {
  if (!u.allFinite() || unitarity_error(u) > 1e-8) {
    fail(ErrorCode::kNotUnitary, "input is not unitary (max |UU^dagger - I| = " +
                                     std::to_string(unitarity_error(u)) + ")");
  }
  const Matrix4 mb = magic_basis();
  const Matrix4 us = u / std::polar(1.0, std::arg(u.determinant()) / 4.0);
  const Matrix4 up = mb.adjoint() * us * mb;
  const Matrix4 w = up.transpose() * up;

  // w is symmetric unitary, so its real and imaginary parts are commuting
  // real symmetric matrices with a common orthogonal eigenbasis. A generic
  // real combination separates their joint eigenspaces; the fixed list keeps
  // the result deterministic.
  static constexpr std::array<double, 6> kMix = {0.6180339887498949, 1.4142135623730951,
                                                 2.718281828459045,  0.1234567890123457,
                                                 7.3890560989306504, 0.3183098861837907};
  Eigen::Matrix4d p;
  bool found = false;
  for (double mix : kMix) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(w.real() + mix * w.imag());
    p = es.eigenvectors();
    const Matrix4 d = p.transpose().cast<cd>() * w * p.cast<cd>();
    Matrix4 off = d;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() < 1e-10) {
      found = true;
      break;
    }
  }
  if (!found) fail(ErrorCode::kInternal, "could not diagonalise the magic-basis Gram matrix");
  if (p.determinant() < 0.0) p.col(3) *= -1.0;

  const Matrix4 d2 = p.transpose().cast<cd>() * w * p.cast<cd>();
  Eigen::Vector4d theta;
  for (int k = 0; k < 4; ++k) theta(k) = std::arg(d2(k, k)) / 2.0;
  // det(up) = 1 forces the sum to a multiple of pi; make it even so the
  // diagonal factor also has unit determinant.
  const long turns = std::lround(theta.sum() / kPi);
  if (turns % 2 != 0) theta(0) -= kPi;

  Matrix4 d_inv = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) d_inv(k, k) = std::exp(-kI * theta(k));
  const Matrix4 o1 = up * p.cast<cd>() * d_inv;
  if (o1.imag().cwiseAbs().maxCoeff() > 1e-8) {
    fail(ErrorCode::kInternal, "left factor is not real orthogonal");
  }
  const Matrix4 k_left = mb * o1.real().cast<cd>() * mb.adjoint();
  Matrix4 k_right = mb * p.transpose().cast<cd>() * mb.adjoint();

  // Magic-basis eigenvalues of XX, YY, ZZ; mutually orthogonal +-1 vectors.
  const Matrix2 x = pauli(Axis::kX);
  const Matrix2 y = pauli(Axis::kY);
  const Matrix2 z = pauli(Axis::kZ);
  const Eigen::Vector4d hx = (mb.adjoint() * kron(x, x) * mb).diagonal().real();
  const Eigen::Vector4d hy = (mb.adjoint() * kron(y, y) * mb).diagonal().real();
  const Eigen::Vector4d hz = (mb.adjoint() * kron(z, z) * mb).diagonal().real();
  std::array<double, 3> coef = {theta.dot(hx) / 4.0, theta.dot(hy) / 4.0, theta.dot(hz) / 4.0};
  const std::array<Matrix4, 3> paulis = {kron(x, x), kron(y, y), kron(z, z)};

  // exp(i(t + pi/2) PP) = exp(i t PP) (i PP); PP commutes with the core, so
  // the extra factor joins the right-hand local block.
  for (std::size_t k = 0; k < 3; ++k) {
    while (coef[k] > kPi / 4 + 1e-13) {
      coef[k] -= kPi / 2;
      k_right = kI * paulis[k] * k_right;
    }
    while (coef[k] <= -kPi / 4 + 1e-13) {
      coef[k] += kPi / 2;
      k_right = -kI * paulis[k] * k_right;
    }
  }

  // Core in time order: MS(-a), (Ry Rx) on both, MS(-c), Ry on both, MS(-b).
  // With e1 = Rx(pi/2) Ry(pi/2) and e2 = Ry(pi/2) this product equals
  // (e2 e1) exp(i(a XX + b YY + c ZZ)), so (e2 e1)^dagger is undone after it.
  const double h = kPi / 2;
  const auto [a1, a2] = kron_factor(k_left);
  const auto [b1, b2] = kron_factor(k_right);

  NativeCircuit raw;
  append_yxy(raw.gates, b1, 0);
  append_yxy(raw.gates, b2, 1);
  raw.gates.push_back({GateKind::kMs, 0, -coef[0]});
  for (int q = 0; q < 2; ++q) {
    raw.gates.push_back({GateKind::kRy, q, h});
    raw.gates.push_back({GateKind::kRx, q, h});
  }
  raw.gates.push_back({GateKind::kMs, 0, -coef[2]});
  for (int q = 0; q < 2; ++q) raw.gates.push_back({GateKind::kRy, q, h});
  raw.gates.push_back({GateKind::kMs, 0, -coef[1]});
  for (int q = 0; q < 2; ++q) {
    raw.gates.push_back({GateKind::kRy, q, -h});
    raw.gates.push_back({GateKind::kRx, q, -h});
    raw.gates.push_back({GateKind::kRy, q, -h});
  }
  append_yxy(raw.gates, a1, 0);
  append_yxy(raw.gates, a2, 1);

  Decomposition out;
  out.a = coef[0];
  out.b = coef[1];
  out.c = coef[2];
  out.single_qubit_count_before_merge = raw.single_qubit_count();
  out.circuit = merge_single_qubit_runs(raw);
  out.circuit.global_phase = 0.0;
  out.circuit.global_phase = phase_between(u, evaluate_circuit(out.circuit));
  out.residual = phase_aligned_distance(u, evaluate_circuit(out.circuit));
  if (!(out.residual < 1e-9) || out.circuit.ms_count() != 3 || out.circuit.single_qubit_count() > 18) {
    fail(ErrorCode::kInternal, "synthesis check failed (residual " + std::to_string(out.residual) + ")");
  }
  return out;
}

Matrix4 preset_unitary(std::string_view name) {
  Matrix4 m = Matrix4::Zero();
  if (name == "identity") return Matrix4::Identity();
  if (name == "cnot") {
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
  }
  if (name == "swap") {
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
  }
  if (name == "iswap") {
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = kI;
    return m;
  }
  if (name.substr(0, 3) == "ms:") {
    const std::string arg(name.substr(3));
    std::size_t used = 0;
    double chi = 0.0;
    try {
      chi = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) fail(ErrorCode::kInvalidArgument, "bad MS angle '" + arg + "'");
    return ms_matrix(chi);
  }
  fail(ErrorCode::kInvalidArgument, "unknown preset '" + std::string(name) +
                                        "' (identity, cnot, swap, iswap, ms:<chi>)");
}

Matrix4 haar_random_unitary(std::uint64_t seed) {
  Rng rng(seed);
  Matrix4 g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cd(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix4> qr(g);
  const Matrix4 q = qr.householderQ();
  const Matrix4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix4 fix = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) fix(k, k) = r(k, k) / std::abs(r(k, k));
  return q * fix;
}

Matrix4 matrix_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("matrix JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("matrix")) j = j["matrix"];
  if (!j.is_array() || j.size() != 4) fail(ErrorCode::kInvalidArgument, "matrix must have 4 rows");
  Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    const nlohmann::json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) fail(ErrorCode::kInvalidArgument, "each row needs 4 entries");
    for (int k = 0; k < 4; ++k) {
      const nlohmann::json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = cd(e[0].get<double>(), e[1].get<double>());
      } else {
        fail(ErrorCode::kInvalidArgument, "matrix entries must be numbers or [re, im]");
      }
    }
  }
  return m;
}

std::string matrix_to_json(const Matrix4& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows.dump();
}

const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::kRx: return "rx";
    case GateKind::kRy: return "ry";
    case GateKind::kMs: return "ms";
  }
  return "?";
}

std::string to_json(const Decomposition& d) {
  nlohmann::json gates = nlohmann::json::array();
  for (const NativeGate& g : d.circuit.gates) {
    if (g.kind == GateKind::kMs) {
      gates.push_back({{"gate", "ms"}, {"chi", g.angle}});
    } else {
      gates.push_back({{"gate", to_string(g.kind)}, {"qubit", g.qubit}, {"angle", g.angle}});
    }
  }
  return nlohmann::json{{"gates", gates},
                        {"global_phase", d.circuit.global_phase},
                        {"ms_count", d.circuit.ms_count()},
                        {"single_qubit_count", d.circuit.single_qubit_count()},
                        {"single_qubit_count_before_merge", d.single_qubit_count_before_merge},
                        {"canonical", {d.a, d.b, d.c}},
                        {"residual", d.residual}}
      .dump(2);
}

std::string to_text(const NativeCircuit& c) {
  std::ostringstream os;
  os << std::setprecision(9);
  for (const NativeGate& g : c.gates) {
    // Adding +0.0 turns a negative zero into a plain 0.
    const double angle = g.angle + 0.0;
    if (g.kind == GateKind::kMs) {
      os << "MS(" << angle << ")\n";
    } else {
      os << (g.kind == GateKind::kRx ? "Rx(" : "Ry(") << angle << ") q" << g.qubit << '\n';
    }
  }
  return os.str();
}

}  // namespace iontrap
