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

#ifndef QDIFFUSE_TESTS_TESTING_ORACLES_H_
#define QDIFFUSE_TESTS_TESTING_ORACLES_H_

// Slow, direct reference implementations used to check the library. None of
// these call into the code paths they are used to verify.

#include <vector>

#include "qdiffuse/circuit.h"
#include "qdiffuse/ensemble.h"
#include "qdiffuse/random.h"
#include "qdiffuse/state.h"

namespace qdiffuse::testing {

// Ginibre G G^dagger / Tr, full rank with probability one.
DensityMatrix random_density(int n, RandomStream& rng);
DensityMatrix random_pure_density(int n, RandomStream& rng);
// Each member is pure with probability pure_fraction, Ginibre otherwise.
WeightedEnsemble random_ensemble(int n, int size, RandomStream& rng,
                                 bool random_weights = true, double pure_fraction = 0.3);

// I (x) ... (x) g (x) ... (x) I assembled by explicit Kronecker products.
Matrix embed_single(const Eigen::Matrix2cd& g, int qubit, int n);
// Diagonal with -1 where both qubits are 1.
Matrix full_cz(int a, int b, int n);
// Product of explicit full-register gate matrices, built from the gate
// definitions rather than from gate_sequence.
Matrix gate_by_gate_unitary(const CircuitStep& step);

// sum over traced indices written out as nested loops.
Matrix naive_partial_trace(const Matrix& rho, int n, const std::vector<int>& keep);

// Z-dephase the trailing ancillas, then trace them out.
Matrix dephase_then_trace(const Matrix& full, int n_anc);

double naive_mean_superfidelity(const WeightedEnsemble& a, const WeightedEnsemble& b);

// min over permutations of sum_i C[i, pi(i)] / n.
double brute_force_assignment(const Eigen::MatrixXd& cost);

// Checks a primal-dual pair for a transportation problem: primal feasibility,
// dual feasibility u_i + v_j <= C_ij, and the duality gap. Returns the largest
// violation found.
double transport_certificate_gap(const Eigen::MatrixXd& cost,
                                 const std::vector<double>& r,
                                 const std::vector<double>& s,
                                 const Eigen::MatrixXd& plan,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace qdiffuse::testing

#endif  // QDIFFUSE_TESTS_TESTING_ORACLES_H_
