// Copyright 2026 The qdiffuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdiffuse/circuit.h"

#include <cmath>
#include <string>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

void require_register(const Matrix& m, Eigen::Index extent, int n,
                      const char* what) {
  if (extent != (Eigen::Index{1} << n)) {
    throw InvalidArgument(std::string(what) + ": matrix extent " +
                          std::to_string(extent) + " does not match " +
                          std::to_string(n) + " qubits");
  }
  (void)m;
}

}  // namespace

CircuitStep::CircuitStep(int n_data, int n_anc, int layers, AncillaKind ancilla)
    : CircuitStep(n_data, n_anc, layers, ancilla,
                  std::vector<double>(parameter_count(n_data, n_anc, layers, 1),
                                      0.0)) {}

CircuitStep::CircuitStep(int n_data, int n_anc, int layers, AncillaKind ancilla,
                         std::vector<double> params)
    : n_data_(n_data), n_anc_(n_anc), layers_(layers), ancilla_(ancilla) {
  if (n_data < 1 || n_anc < 0 || layers < 0) {
    throw InvalidArgument("CircuitStep: need n_data >= 1, n_anc >= 0, L >= 0");
  }
  if (n_data + n_anc > kMaxQubits) {
    throw InvalidArgument("CircuitStep: " + std::to_string(n_data + n_anc) +
                          " qubits exceeds the cap of " +
                          std::to_string(kMaxQubits));
  }
  if (ancilla == AncillaKind::kHaarFirst && n_anc < 1) {
    throw InvalidArgument("CircuitStep: Haar ancilla needs n_anc >= 1");
  }
  set_params(params);
}

void CircuitStep::set_params(std::span<const double> params) {
  const std::size_t expected = parameter_count(n_data_, n_anc_, layers_, 1);
  if (params.size() != expected) {
    throw InvalidArgument("CircuitStep: expected " + std::to_string(expected) +
                          " parameters, got " + std::to_string(params.size()));
  }
  for (double v : params) {
    if (!std::isfinite(v)) throw NumericalError("CircuitStep: non-finite angle");
  }
  params_.assign(params.begin(), params.end());
}

std::size_t CircuitStep::param_index(int layer, int qubit, Axis axis) const {
  if (layer < 0 || layer >= layers_ || qubit < 0 || qubit >= num_qubits()) {
    throw InvalidArgument("CircuitStep: parameter index out of range");
  }
  return (static_cast<std::size_t>(layer) * static_cast<std::size_t>(num_qubits()) +
          static_cast<std::size_t>(qubit)) * 2 +
         static_cast<std::size_t>(axis);
}

double CircuitStep::angle(int layer, int qubit, Axis axis) const {
  return params_[param_index(layer, qubit, axis)];
}

std::size_t parameter_count(int n_data, int n_anc, int layers, int steps) {
  return static_cast<std::size_t>(steps) * static_cast<std::size_t>(layers) *
         static_cast<std::size_t>(n_data + n_anc) * 2;
}

std::vector<Gate> gate_sequence(const CircuitStep& step) {
  const int n = step.num_qubits();
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(step.num_layers()) *
                static_cast<std::size_t>(3 * n));
  for (int l = 0; l < step.num_layers(); ++l) {
    for (int q = 0; q < n; ++q) {
      gates.push_back({Gate::Kind::kRx, q, -1,
                       static_cast<std::ptrdiff_t>(step.param_index(l, q, Axis::kX))});
      gates.push_back({Gate::Kind::kRy, q, -1,
                       static_cast<std::ptrdiff_t>(step.param_index(l, q, Axis::kY))});
    }
    for (int q = 0; q + 1 < n; ++q) gates.push_back({Gate::Kind::kCz, q, q + 1, -1});
  }
  return gates;
}

Eigen::Matrix2cd rotation_matrix(Gate::Kind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd u;
  if (kind == Gate::Kind::kRx) {
    u << cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0);
  } else if (kind == Gate::Kind::kRy) {
    u << c, -s, s, c;
  } else {
    throw InvalidArgument("rotation_matrix: CZ is not a rotation");
  }
  return u;
}

void apply_single_left(Matrix& m, const Eigen::Matrix2cd& u, int qubit, int n) {
  require_register(m, m.rows(), n, "apply_single_left");
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - qubit);
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const Eigen::Index rows = m.rows();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    cplx* col = m.col(c).data();
    for (Eigen::Index r0 = 0; r0 < rows; ++r0) {
      if (r0 & bit) continue;
      const Eigen::Index r1 = r0 | bit;
      const cplx a = col[r0];
      const cplx b = col[r1];
      col[r0] = u00 * a + u01 * b;
      col[r1] = u10 * a + u11 * b;
    }
  }
}

void apply_single_right(Matrix& m, const Eigen::Matrix2cd& u, int qubit, int n) {
  require_register(m, m.cols(), n, "apply_single_right");
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - qubit);
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (Eigen::Index c0 = 0; c0 < m.cols(); ++c0) {
    if (c0 & bit) continue;
    const Eigen::Index c1 = c0 | bit;
    // (m G)_{:,c0} = m_{:,c0} u00 + m_{:,c1} u10, (m G)_{:,c1} = m_{:,c0} u01 + m_{:,c1} u11
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const cplx a = m(r, c0);
      const cplx b = m(r, c1);
      m(r, c0) = a * u00 + b * u10;
      m(r, c1) = a * u01 + b * u11;
    }
  }
}

void apply_cz_left(Matrix& m, int a, int b, int n) {
  require_register(m, m.rows(), n, "apply_cz_left");
  const Eigen::Index mask = (Eigen::Index{1} << (n - 1 - a)) |
                            (Eigen::Index{1} << (n - 1 - b));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if ((r & mask) == mask) m.row(r) *= -1.0;
  }
}

void apply_cz_right(Matrix& m, int a, int b, int n) {
  require_register(m, m.cols(), n, "apply_cz_right");
  const Eigen::Index mask = (Eigen::Index{1} << (n - 1 - a)) |
                            (Eigen::Index{1} << (n - 1 - b));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if ((c & mask) == mask) m.col(c) *= -1.0;
  }
}

void apply_step_left(Matrix& m, const CircuitStep& step) {
  const int n = step.num_qubits();
  const auto params = step.params();
  for (const Gate& g : gate_sequence(step)) {
    if (g.kind == Gate::Kind::kCz) {
      apply_cz_left(m, g.qubit, g.other, n);
    } else {
      apply_single_left(m, rotation_matrix(g.kind, params[static_cast<std::size_t>(g.param)]),
                        g.qubit, n);
    }
  }
}

Matrix step_unitary(const CircuitStep& step) {
  const Eigen::Index dim = Eigen::Index{1} << step.num_qubits();
  Matrix u = Matrix::Identity(dim, dim);
  apply_step_left(u, step);
  return u;
}

DensityMatrix apply_step_unitary(const DensityMatrix& full, const CircuitStep& step) {
  if (full.num_qubits() != step.num_qubits()) {
    throw InvalidArgument("apply_step_unitary: state has " +
                          std::to_string(full.num_qubits()) +
                          " qubits, step acts on " +
                          std::to_string(step.num_qubits()));
  }
  const Matrix u = step_unitary(step);
  return DensityMatrix::from_trusted(u * full.matrix() * u.adjoint());
}

}  // namespace qdiffuse
