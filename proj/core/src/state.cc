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

#include "qdiffuse/state.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b,
                      const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
}

// Hermitian square root with negative eigenvalues clamped to zero.
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  // Eigenvalues at roundoff level would otherwise contribute sqrt(eps).
  const double floor = kRoundoffDefect * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd roots =
      eig.eigenvalues().unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if (dim < 2 || (Eigen::Index{1} << n) != dim) {
    throw InvalidArgument("dimension " + std::to_string(dim) +
                          " is not a power of two >= 2");
  }
  if (n > kMaxQubits) {
    throw InvalidArgument("register of " + std::to_string(n) +
                          " qubits exceeds the cap of " +
                          std::to_string(kMaxQubits));
  }
  return n;
}

PureState PureState::from_amplitudes(Vector amplitudes) {
  const int n = qubits_for_dim(amplitudes.size());
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("cannot normalize a zero or non-finite state vector");
  }
  amplitudes /= norm;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  qubits_for_dim(dim);
  if (static_cast<Eigen::Index>(index) >= dim) {
    throw InvalidArgument("basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(num_qubits, std::move(v));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

StateDefects inspect_state(const Matrix& m) {
  StateDefects d;
  if (m.rows() != m.cols() || m.rows() == 0) {
    d.hermiticity = d.trace = std::numeric_limits<double>::infinity();
    d.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return d;
  }
  d.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  d.trace = std::abs(m.trace() - cplx(1.0, 0.0));
  Matrix h = m;
  hermitize(h);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = eig.eigenvalues().minCoeff();
  return d;
}

void hermitize(Matrix& m) {
  Matrix adj = m.adjoint();
  m = (m + adj) * 0.5;
}

DensityMatrix DensityMatrix::from_matrix(Matrix m, double tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("density matrix must be square");
  const int n = qubits_for_dim(m.rows());
  if (!m.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  const StateDefects d = inspect_state(m);
  if (!d.within(tol)) {
    throw InvalidArgument(
        "not a density matrix: hermiticity " + std::to_string(d.hermiticity) +
        ", trace error " + std::to_string(d.trace) + ", min eigenvalue " +
        std::to_string(d.min_eigenvalue));
  }
  hermitize(m);
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::from_trusted(Matrix m) {
  if (m.rows() != m.cols()) throw InvalidArgument("density matrix must be square");
  const int n = qubits_for_dim(m.rows());
  hermitize(m);
  return DensityMatrix(n, std::move(m));
}

DensityMatrix density_from_pure(const PureState& psi) {
  const Vector& a = psi.amplitudes();
  return DensityMatrix::from_trusted(a * a.adjoint());
}

DensityMatrix maximally_mixed(int num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("maximally_mixed: need n >= 1");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  qubits_for_dim(dim);
  return DensityMatrix::from_trusted(Matrix::Identity(dim, dim) /
                                     static_cast<double>(dim));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
    throw InvalidArgument("tensor: " +
                          std::to_string(a.num_qubits() + b.num_qubits()) +
                          " qubits exceeds the cap of " +
                          std::to_string(kMaxQubits));
  }
  const Eigen::Index da = a.dim();
  const Eigen::Index db = b.dim();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
    }
  }
  return DensityMatrix::from_trusted(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int q = keep[k];
    if (q < 0 || q >= n || kept[static_cast<std::size_t>(q)] ||
        (k > 0 && keep[k - 1] >= q)) {
      throw InvalidArgument("partial_trace: keep set must be ascending, unique "
                            "and within [0, n)");
    }
    kept[static_cast<std::size_t>(q)] = true;
  }
  // Bit masks of the full index for kept and traced qubits, most significant
  // first within each group.
  std::vector<Eigen::Index> keep_bits;
  std::vector<Eigen::Index> trace_bits;
  for (int q = 0; q < n; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    (kept[static_cast<std::size_t>(q)] ? keep_bits : trace_bits).push_back(bit);
  }
  auto spread = [](Eigen::Index local, const std::vector<Eigen::Index>& bits) {
    Eigen::Index full = 0;
    const std::size_t m = bits.size();
    for (std::size_t k = 0; k < m; ++k) {
      if (local & (Eigen::Index{1} << (m - 1 - k))) full |= bits[k];
    }
    return full;
  };
  const Eigen::Index dk = Eigen::Index{1} << keep_bits.size();
  const Eigen::Index dt = Eigen::Index{1} << trace_bits.size();
  std::vector<Eigen::Index> keep_map(static_cast<std::size_t>(dk));
  std::vector<Eigen::Index> trace_map(static_cast<std::size_t>(dt));
  for (Eigen::Index i = 0; i < dk; ++i) keep_map[i] = spread(i, keep_bits);
  for (Eigen::Index t = 0; t < dt; ++t) trace_map[t] = spread(t, trace_bits);

  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index j = 0; j < dk; ++j) {
    for (Eigen::Index i = 0; i < dk; ++i) {
      cplx acc = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) {
        acc += m(keep_map[i] | trace_map[t], keep_map[j] | trace_map[t]);
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix::from_trusted(std::move(out));
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().squaredNorm();
}

double trace_product(const Matrix& a, const Matrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (a.array() * b.array().conjugate()).real().sum();
}

double trace_product(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_product");
  const cplx tr = (rho.matrix().array() * sigma.matrix().transpose().array()).sum();
  if (std::abs(tr.imag()) > 1e-10) {
    throw NumericalError("trace_product: imaginary part " +
                         std::to_string(tr.imag()) + " exceeds 1e-10");
  }
  return tr.real();
}

double purity_defect_root(double purity_value) {
  const double defect = 1.0 - purity_value;
  return defect > kRoundoffDefect ? std::sqrt(defect) : 0.0;
}

double superfidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "superfidelity");
  return trace_product(rho.matrix(), sigma.matrix()) +
         purity_defect_root(purity(rho)) * purity_defect_root(purity(sigma));
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "uhlmann_fidelity");
  // Nuclear norm of sqrt(rho) sqrt(sigma).
  const Matrix product = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  const double tr = Eigen::JacobiSVD<Matrix>(product).singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

PureState haar_random_pure(int num_qubits, RandomStream& rng) {
  if (num_qubits < 1) throw InvalidArgument("haar_random_pure: need n >= 1");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return PureState::from_amplitudes(std::move(v));
}

BlochVector bloch_coordinates(const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw InvalidArgument("bloch_coordinates: state must be a single qubit");
  }
  const cplx off = rho(0, 1);
  return {2.0 * off.real(), -2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

}  // namespace qdiffuse
