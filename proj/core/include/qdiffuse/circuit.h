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

#ifndef QDIFFUSE_CIRCUIT_H_
#define QDIFFUSE_CIRCUIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdiffuse/state.h"

namespace qdiffuse {

enum class Axis : int { kX = 0, kY = 1 };

enum class AncillaKind {
  kAllZero,    // |0...0>
  kHaarFirst,  // |phi_Haar> (x) |0...0>
};

// One backward denoising block: L layers of hardware-efficient ansatz acting on
// n_data + n_anc qubits. Each layer applies RX then RY on every qubit, then CZ
// on the open chain (0,1), (1,2), ... . Rotation angles are stored flat in
// [layer][qubit][axis] order.
class CircuitStep {
 public:
  CircuitStep() = default;
  CircuitStep(int n_data, int n_anc, int layers, AncillaKind ancilla);
  CircuitStep(int n_data, int n_anc, int layers, AncillaKind ancilla,
              std::vector<double> params);

  int num_data_qubits() const { return n_data_; }
  int num_ancillas() const { return n_anc_; }
  int num_qubits() const { return n_data_ + n_anc_; }
  int num_layers() const { return layers_; }
  AncillaKind ancilla_kind() const { return ancilla_; }

  std::size_t num_params() const { return params_.size(); }
  std::span<const double> params() const { return params_; }
  // Replaces all angles; throws on size mismatch or non-finite values.
  void set_params(std::span<const double> params);

  double angle(int layer, int qubit, Axis axis) const;
  std::size_t param_index(int layer, int qubit, Axis axis) const;

 private:
  int n_data_ = 0;
  int n_anc_ = 0;
  int layers_ = 0;
  AncillaKind ancilla_ = AncillaKind::kAllZero;
  std::vector<double> params_;
};

// T * L * (n_data + n_anc) * 2.
std::size_t parameter_count(int n_data, int n_anc, int layers, int steps);

struct Gate {
  enum class Kind { kRx, kRy, kCz };
  Kind kind;
  int qubit;          // target (or first qubit of a CZ pair)
  int other = -1;     // second CZ qubit
  std::ptrdiff_t param = -1;  // index into CircuitStep::params(), -1 for CZ
};

// Time-ordered gate list of a step.
std::vector<Gate> gate_sequence(const CircuitStep& step);

// exp(-i angle P / 2) for P = X or Y.
Eigen::Matrix2cd rotation_matrix(Gate::Kind kind, double angle);

// In-place application of a gate on an n-qubit register to the rows or
// columns of a matrix with 2^n rows (resp. columns).
//   apply_left:  m <- G m
//   apply_right: m <- m G
void apply_single_left(Matrix& m, const Eigen::Matrix2cd& u, int qubit, int n);
void apply_single_right(Matrix& m, const Eigen::Matrix2cd& u, int qubit, int n);
void apply_cz_left(Matrix& m, int a, int b, int n);
void apply_cz_right(Matrix& m, int a, int b, int n);

// Full 2^(n_data+n_anc) unitary of a step.
Matrix step_unitary(const CircuitStep& step);
// Applies the step's gates to the columns of `m` (m <- U m).
void apply_step_left(Matrix& m, const CircuitStep& step);

// U rho U^dagger on the full data + ancilla register.
DensityMatrix apply_step_unitary(const DensityMatrix& full, const CircuitStep& step);

}  // namespace qdiffuse

#endif  // QDIFFUSE_CIRCUIT_H_
