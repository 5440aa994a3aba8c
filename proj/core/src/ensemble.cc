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

#include "qdiffuse/ensemble.h"

#include <cmath>
#include <string>

#include "qdiffuse/errors.h"

namespace qdiffuse {

WeightedEnsemble::WeightedEnsemble(std::vector<EnsembleMember> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("WeightedEnsemble: no members");
  const Eigen::Index dim = members_.front().state.dim();
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.state.dim() != dim) {
      throw InvalidArgument("WeightedEnsemble: mixed state dimensions");
    }
    if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) {
      throw InvalidArgument("WeightedEnsemble: weights must be finite and >= 0");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvalidArgument("WeightedEnsemble: weights sum to " +
                          std::to_string(total));
  }
}

WeightedEnsemble WeightedEnsemble::uniform(std::span<const DensityMatrix> states) {
  std::vector<EnsembleMember> members;
  members.reserve(states.size());
  const double w = 1.0 / static_cast<double>(states.size());
  for (const auto& s : states) members.push_back({s, w});
  return WeightedEnsemble(std::move(members));
}

int WeightedEnsemble::num_qubits() const {
  return members_.empty() ? 0 : members_.front().state.num_qubits();
}

Eigen::Index WeightedEnsemble::dim() const {
  return members_.empty() ? 0 : members_.front().state.dim();
}

std::vector<double> WeightedEnsemble::weights() const {
  std::vector<double> w;
  w.reserve(members_.size());
  for (const auto& m : members_) w.push_back(m.weight);
  return w;
}

std::vector<DensityMatrix> WeightedEnsemble::states() const {
  std::vector<DensityMatrix> s;
  s.reserve(members_.size());
  for (const auto& m : members_) s.push_back(m.state);
  return s;
}

double mean_purity(const WeightedEnsemble& ensemble) {
  double acc = 0.0;
  for (const auto& m : ensemble) acc += m.weight * purity(m.state);
  return acc;
}

}  // namespace qdiffuse
