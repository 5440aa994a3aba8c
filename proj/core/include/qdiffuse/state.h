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

#ifndef QDIFFUSE_STATE_H_
#define QDIFFUSE_STATE_H_

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "qdiffuse/random.h"

namespace qdiffuse {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Largest register (data + ancilla) any dense operation will allocate.
inline constexpr int kMaxQubits = 10;
// Hermiticity, unit-trace and positivity tolerance for density matrices.
inline constexpr double kStateTolerance = 1e-9;
// Purity defects and eigenvalues below this are treated as exact zeros.
inline constexpr double kRoundoffDefect = 1e-14;

// Throws InvalidArgument unless `dim` is 2^n with 1 <= n <= kMaxQubits.
int qubits_for_dim(Eigen::Index dim);

// Normalized state vector on n qubits. Qubit 0 is the most significant bit of
// the basis index.
class PureState {
 public:
  PureState() = default;

  // Normalizes `amplitudes`; throws on a zero vector or non-power-of-two size.
  static PureState from_amplitudes(Vector amplitudes);
  static PureState basis(int num_qubits, std::size_t index);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  PureState(int num_qubits, Vector amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_ = 0;
  Vector amplitudes_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

// Distance of a matrix from the density-matrix set, per invariant.
struct StateDefects {
  double hermiticity = 0.0;    // max |m_ij - conj(m_ji)|
  double trace = 0.0;          // |Tr m - 1|
  double min_eigenvalue = 0.0;

  bool within(double tol = kStateTolerance) const {
    return hermiticity <= tol && trace <= tol && min_eigenvalue >= -tol;
  }
};

StateDefects inspect_state(const Matrix& m);

// Hermitian, unit-trace, positive semidefinite operator on 2^n dimensions.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  // Checks all three invariants at `tol` and throws InvalidArgument on
  // failure. The stored matrix is re-Hermitized.
  static DensityMatrix from_matrix(Matrix m, double tol = kStateTolerance);

  // For outputs of channels that preserve the invariants by construction.
  // Checks only the shape; re-Hermitizes.
  static DensityMatrix from_trusted(Matrix m);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

 private:
  DensityMatrix(int num_qubits, Matrix m)
      : num_qubits_(num_qubits), matrix_(std::move(m)) {}

  int num_qubits_ = 0;
  Matrix matrix_;
};

// (m + m^dagger) / 2, in place.
void hermitize(Matrix& m);

DensityMatrix density_from_pure(const PureState& psi);
DensityMatrix maximally_mixed(int num_qubits);

// Kronecker product; the qubits of `a` precede (are more significant than)
// those of `b`.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on the qubits in `keep` (ascending, unique, nonempty).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

double purity(const DensityMatrix& rho);
// Re Tr(rho sigma); throws NumericalError if the imaginary part exceeds 1e-10.
double trace_product(const DensityMatrix& rho, const DensityMatrix& sigma);
// Tr(rho sigma) for Hermitian operands, no checks.
double trace_product(const Matrix& a, const Matrix& b);

// sqrt(1 - Tr rho^2), the purity-defect term of the superfidelity. Defects
// below kRoundoffDefect give exactly zero.
double purity_defect_root(double purity_value);

double superfidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

PureState haar_random_pure(int num_qubits, RandomStream& rng);

BlochVector bloch_coordinates(const DensityMatrix& rho);

}  // namespace qdiffuse

#endif  // QDIFFUSE_STATE_H_
