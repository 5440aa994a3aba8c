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

#ifndef QDIFFUSE_BACKWARD_H_
#define QDIFFUSE_BACKWARD_H_

#include <cstddef>
#include <span>
#include <vector>

#include "qdiffuse/circuit.h"
#include "qdiffuse/ensemble.h"
#include "qdiffuse/random.h"
#include "qdiffuse/state.h"

namespace qdiffuse {

enum class MeasurementMode {
  kEnumerate,   // keep every outcome, weighted by its Born probability
  kStochastic,  // sample one outcome per member by inverse CDF
};

// Outcomes with Born probability below this are dropped and the remaining
// branch weights renormalized.
inline constexpr double kBranchPruneThreshold = 1e-12;

PureState prepare_ancilla(AncillaKind kind, int n_anc, RandomStream& rng);

// Z-basis measurement of the trailing `n_anc` qubits of `full`. Each branch's
// weight is multiplied by `parent_weight`.
WeightedEnsemble measure_ancillas(const DensityMatrix& full, int n_anc,
                                  MeasurementMode mode, RandomStream& rng,
                                  double parent_weight = 1.0);

// A step acting on data (x) pure ancilla, reduced to Kraus form. The ancilla
// always lies in a small subspace of the ancilla register (span{|0..0>} for
// kAllZero, span{|00..0>, |10..0>} for kHaarFirst), so only U restricted to
// that subspace is formed:
//   V = U E,  K_b(c) = S_b V (I_d (x) c)
// where E embeds data (x) subspace, S_b selects ancilla outcome b, and c holds
// the ancilla's coefficients in the subspace basis.
class StepChannel {
 public:
  explicit StepChannel(const CircuitStep& step);

  const CircuitStep& step() const { return step_; }
  Eigen::Index data_dim() const { return data_dim_; }
  Eigen::Index outcomes() const { return outcomes_; }
  int subspace_dim() const { return subspace_dim_; }
  // V, of shape 2^(n_data+n_anc) x (data_dim * subspace_dim).
  const Matrix& restricted_unitary() const { return restricted_; }

  Matrix kraus(Eigen::Index outcome, const Vector& coeffs) const;

  // E, the isometry onto data (x) ancilla subspace.
  static Matrix subspace_embedding(const CircuitStep& step);
  // Full-register ancilla index of subspace basis vector `mu`.
  static Eigen::Index subspace_index(const CircuitStep& step, int mu);

 private:
  CircuitStep step_;
  Eigen::Index data_dim_;
  Eigen::Index outcomes_;
  int subspace_dim_;
  Matrix restricted_;
};

// Coefficients of an ancilla state in the step's ancilla subspace basis.
Vector ancilla_coefficients(const CircuitStep& step, const PureState& ancilla);

// Randomness consumed by one ensemble member in one backward hop, drawn from
// sub-streams keyed by the member index.
struct MemberDraws {
  Vector ancilla;    // subspace coefficients
  double uniform;    // inverse-CDF draw for stochastic measurement
};
MemberDraws draw_member(const CircuitStep& step, const RandomStream& step_stream,
                        std::size_t member);

struct Branch {
  std::size_t source = 0;     // index of the input member
  Eigen::Index outcome = 0;   // ancilla bitstring
  Matrix kraus;               // K_b
  Matrix block;               // K_b rho K_b^dagger (unnormalized)
  double probability = 0.0;   // Tr block
  double weight = 0.0;        // parent weight * renormalized probability
};

// Branches of one input member kept under `mode`.
std::vector<Branch> branch_member(const StepChannel& channel, const Matrix& rho,
                                  const MemberDraws& draws, MeasurementMode mode,
                                  double parent_weight, std::size_t source);

WeightedEnsemble ensemble_from_branches(std::span<const Branch> branches);

// One denoising hop: attach ancilla, apply the step's unitary, measure.
WeightedEnsemble backward_step(const WeightedEnsemble& ensemble,
                               const CircuitStep& step, MeasurementMode mode,
                               const RandomStream& step_stream);

// T trained blocks, stored in application order U_T, U_{T-1}, ..., U_1.
class BackwardPipeline {
 public:
  BackwardPipeline() = default;
  BackwardPipeline(int n_data, int n_anc, int layers, int steps,
                   AncillaKind ancilla);

  int steps() const { return static_cast<int>(ordered_.size()); }
  int num_data_qubits() const { return n_data_; }
  int num_ancillas() const { return n_anc_; }
  int num_layers() const { return layers_; }
  AncillaKind ancilla_kind() const { return ancilla_; }
  std::size_t total_params() const;

  // Block U_t, 1 <= t <= T.
  const CircuitStep& step(int t) const;
  void set_step(int t, CircuitStep step);
  std::span<const CircuitStep> ordered() const { return ordered_; }

  // Smallest t whose block has been trained; T + 1 when none has.
  int trained_down_to() const { return trained_down_to_; }
  void mark_trained(int t);

 private:
  std::size_t slot(int t) const;

  int n_data_ = 0;
  int n_anc_ = 0;
  int layers_ = 0;
  AncillaKind ancilla_ = AncillaKind::kAllZero;
  std::vector<CircuitStep> ordered_;
  int trained_down_to_ = 1;
};

// Starts from `n_samples` copies of I/d and applies U_T, ..., U_{down_to+1}.
// Step t uses the sub-stream stream.split(t).
WeightedEnsemble generate(const BackwardPipeline& pipeline, int down_to,
                          int n_samples, MeasurementMode mode,
                          const RandomStream& stream);

// Same, returning every intermediate ensemble: element k is {rho~_{T-k}}.
std::vector<WeightedEnsemble> generate_trace(const BackwardPipeline& pipeline,
                                             int down_to, int n_samples,
                                             MeasurementMode mode,
                                             const RandomStream& stream);

}  // namespace qdiffuse

#endif  // QDIFFUSE_BACKWARD_H_
