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

#ifndef QDIFFUSE_ENSEMBLE_H_
#define QDIFFUSE_ENSEMBLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "qdiffuse/state.h"

namespace qdiffuse {

inline constexpr double kWeightTolerance = 1e-9;

struct EnsembleMember {
  DensityMatrix state;
  double weight = 0.0;
};

// States with probability weights summing to one.
class WeightedEnsemble {
 public:
  WeightedEnsemble() = default;
  // Throws InvalidArgument on negative weights, weights not summing to one
  // within kWeightTolerance, or mixed state dimensions.
  explicit WeightedEnsemble(std::vector<EnsembleMember> members);

  static WeightedEnsemble uniform(std::span<const DensityMatrix> states);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const EnsembleMember& operator[](std::size_t i) const { return members_[i]; }
  std::span<const EnsembleMember> members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  int num_qubits() const;
  Eigen::Index dim() const;
  std::vector<double> weights() const;
  std::vector<DensityMatrix> states() const;

 private:
  std::vector<EnsembleMember> members_;
};

// Weighted mean of Tr rho^2.
double mean_purity(const WeightedEnsemble& ensemble);

}  // namespace qdiffuse

#endif  // QDIFFUSE_ENSEMBLE_H_
