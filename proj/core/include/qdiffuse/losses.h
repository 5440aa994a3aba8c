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

#ifndef QDIFFUSE_LOSSES_H_
#define QDIFFUSE_LOSSES_H_

#include <vector>

#include "qdiffuse/ensemble.h"
#include "qdiffuse/transport.h"

namespace qdiffuse {

// Floor on 1 - Tr rho^2 inside derivatives of the superfidelity's square-root
// term; the term itself is evaluated unguarded.
inline constexpr double kDefectFloor = 1e-12;

enum class MeanEstimator {
  kBiased,    // all pairs, coincident ones included
  kUnbiased,  // self-similarity terms with coincident members excluded
};

// G(rho, sigma) = <rho, sigma> + f(rho) f(sigma) with
// f = sqrt(max(0, 1 - Tr rho^2)), so the weighted all-pairs mean factors
// through the weighted mean state and the weighted mean of f.
struct SuperfidelityFeatures {
  Matrix mean_state;
  double mean_defect_root = 0.0;
};
SuperfidelityFeatures superfidelity_features(const WeightedEnsemble& ensemble);

// sum_i sum_j w_i v_j G(rho_i, sigma_j).
double mean_superfidelity(const WeightedEnsemble& a, const WeightedEnsemble& b);
// sum_{i != j} w_i w_j G(rho_i, rho_j) / (1 - sum_i w_i^2).
double mean_superfidelity_unbiased(const WeightedEnsemble& a);

double mmd_distance(const WeightedEnsemble& a, const WeightedEnsemble& b,
                    MeanEstimator estimator = MeanEstimator::kBiased);

// C_ij = max(0, 1 - G(rho_i, sigma_j)).
Eigen::MatrixXd cost_matrix(const WeightedEnsemble& a, const WeightedEnsemble& b);

TransportPlan wasserstein_plan(const WeightedEnsemble& a, const WeightedEnsemble& b);
double wasserstein(const WeightedEnsemble& a, const WeightedEnsemble& b);

// Value of a loss between a model ensemble and a fixed target ensemble, with
// its first-order sensitivity to the model's members:
//   dL = sum_i [ weight[i] dw_i + Re Tr(state[i] d rho_i) ]
// for Hermitian perturbations d rho_i. `state[i]` is Hermitian.
struct LossGradient {
  double value = 0.0;
  std::vector<Matrix> state;
  std::vector<double> weight;
};

// With kUnbiased the coincident-member terms are removed from both
// self-similarity means; G(rho, rho) = 1 is used for the removed terms.
LossGradient mmd_gradient(const WeightedEnsemble& model,
                          const WeightedEnsemble& target,
                          MeanEstimator estimator = MeanEstimator::kBiased);

// Envelope rule at the optimal plan P*: the state sensitivity holds P* fixed
// and the weight sensitivity is the optimal row potential. Ties between
// optimal plans give one valid subgradient.
LossGradient wasserstein_gradient(const WeightedEnsemble& model,
                                  const WeightedEnsemble& target);

}  // namespace qdiffuse

#endif  // QDIFFUSE_LOSSES_H_
