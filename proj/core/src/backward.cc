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

#include "qdiffuse/backward.h"

#include <string>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

// Keeps outcomes above the prune threshold and assigns renormalized weights;
// in stochastic mode keeps only the outcome selected by `uniform`.
std::vector<Branch> select_branches(std::vector<Branch> all, MeasurementMode mode,
                                    double uniform, double parent_weight) {
  std::vector<Branch> kept;
  kept.reserve(all.size());
  double total = 0.0;
  for (auto& b : all) {
    if (b.probability >= kBranchPruneThreshold) {
      total += b.probability;
      kept.push_back(std::move(b));
    }
  }
  if (kept.empty() || !(total > 0.0)) {
    throw NumericalError("measurement: every outcome has vanishing probability");
  }
  if (mode == MeasurementMode::kEnumerate) {
    for (auto& b : kept) b.weight = parent_weight * b.probability / total;
    return kept;
  }
  const double target = uniform * total;
  double cumulative = 0.0;
  std::size_t chosen = kept.size() - 1;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    cumulative += kept[i].probability;
    if (target < cumulative) {
      chosen = i;
      break;
    }
  }
  Branch b = std::move(kept[chosen]);
  b.weight = parent_weight;
  std::vector<Branch> out;
  out.push_back(std::move(b));
  return out;
}

}  // namespace

PureState prepare_ancilla(AncillaKind kind, int n_anc, RandomStream& rng) {
  if (n_anc < 1) throw InvalidArgument("prepare_ancilla: need n_anc >= 1");
  if (kind == AncillaKind::kAllZero) return PureState::basis(n_anc, 0);
  const PureState phi = haar_random_pure(1, rng);
  const Eigen::Index dim = Eigen::Index{1} << n_anc;
  Vector v = Vector::Zero(dim);
  v(0) = phi.amplitudes()(0);
  v(dim / 2) = phi.amplitudes()(1);
  return PureState::from_amplitudes(std::move(v));
}

WeightedEnsemble measure_ancillas(const DensityMatrix& full, int n_anc,
                                  MeasurementMode mode, RandomStream& rng,
                                  double parent_weight) {
  if (n_anc < 0 || n_anc >= full.num_qubits()) {
    throw InvalidArgument("measure_ancillas: invalid ancilla count " +
                          std::to_string(n_anc));
  }
  const Eigen::Index outcomes = Eigen::Index{1} << n_anc;
  const Eigen::Index d = full.dim() / outcomes;
  std::vector<Branch> all(static_cast<std::size_t>(outcomes));
  for (Eigen::Index b = 0; b < outcomes; ++b) {
    Matrix block(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        block(i, j) = full(i * outcomes + b, j * outcomes + b);
      }
    }
    auto& br = all[static_cast<std::size_t>(b)];
    br.outcome = b;
    br.probability = block.trace().real();
    br.block = std::move(block);
  }
  const double u = mode == MeasurementMode::kStochastic ? rng.uniform() : 0.0;
  return ensemble_from_branches(select_branches(std::move(all), mode, u, parent_weight));
}

StepChannel::StepChannel(const CircuitStep& step)
    : step_(step),
      data_dim_(Eigen::Index{1} << step.num_data_qubits()),
      outcomes_(Eigen::Index{1} << step.num_ancillas()),
      subspace_dim_(step.ancilla_kind() == AncillaKind::kHaarFirst ? 2 : 1),
      restricted_(subspace_embedding(step)) {
  apply_step_left(restricted_, step);
}

Eigen::Index StepChannel::subspace_index(const CircuitStep& step, int mu) {
  return mu == 0 ? 0 : (Eigen::Index{1} << step.num_ancillas()) / 2;
}

Matrix StepChannel::subspace_embedding(const CircuitStep& step) {
  const Eigen::Index d = Eigen::Index{1} << step.num_data_qubits();
  const Eigen::Index a = Eigen::Index{1} << step.num_ancillas();
  const int m = step.ancilla_kind() == AncillaKind::kHaarFirst ? 2 : 1;
  Matrix e = Matrix::Zero(d * a, d * m);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (int mu = 0; mu < m; ++mu) {
      e(j * a + subspace_index(step, mu), j * m + mu) = 1.0;
    }
  }
  return e;
}

Matrix StepChannel::kraus(Eigen::Index outcome, const Vector& coeffs) const {
  const int m = subspace_dim_;
  Matrix k(data_dim_, data_dim_);
  for (Eigen::Index j = 0; j < data_dim_; ++j) {
    for (Eigen::Index i = 0; i < data_dim_; ++i) {
      cplx acc = 0.0;
      for (int mu = 0; mu < m; ++mu) {
        acc += restricted_(i * outcomes_ + outcome, j * m + mu) * coeffs(mu);
      }
      k(i, j) = acc;
    }
  }
  return k;
}

Vector ancilla_coefficients(const CircuitStep& step, const PureState& ancilla) {
  if (ancilla.num_qubits() != step.num_ancillas()) {
    throw InvalidArgument("ancilla_coefficients: ancilla size mismatch");
  }
  const int m = step.ancilla_kind() == AncillaKind::kHaarFirst ? 2 : 1;
  Vector c(m);
  double captured = 0.0;
  for (int mu = 0; mu < m; ++mu) {
    c(mu) = ancilla.amplitudes()(StepChannel::subspace_index(step, mu));
    captured += std::norm(c(mu));
  }
  if (std::abs(captured - 1.0) > 1e-12) {
    throw InvalidArgument("ancilla_coefficients: ancilla outside the step's "
                          "ancilla subspace");
  }
  return c;
}

MemberDraws draw_member(const CircuitStep& step, const RandomStream& step_stream,
                        std::size_t member) {
  MemberDraws draws;
  if (step.num_ancillas() == 0) {
    draws.ancilla = Vector::Ones(1);
  } else {
    RandomStream anc = step_stream.split(StreamTag::kAncilla, member);
    draws.ancilla = ancilla_coefficients(
        step, prepare_ancilla(step.ancilla_kind(), step.num_ancillas(), anc));
  }
  RandomStream meas = step_stream.split(StreamTag::kMeasure, member);
  draws.uniform = meas.uniform();
  return draws;
}

std::vector<Branch> branch_member(const StepChannel& channel, const Matrix& rho,
                                  const MemberDraws& draws, MeasurementMode mode,
                                  double parent_weight, std::size_t source) {
  if (rho.rows() != channel.data_dim()) {
    throw InvalidArgument("backward step: input dimension " +
                          std::to_string(rho.rows()) + " does not match data "
                          "register dimension " +
                          std::to_string(channel.data_dim()));
  }
  std::vector<Branch> all(static_cast<std::size_t>(channel.outcomes()));
  for (Eigen::Index b = 0; b < channel.outcomes(); ++b) {
    auto& br = all[static_cast<std::size_t>(b)];
    br.source = source;
    br.outcome = b;
    br.kraus = channel.kraus(b, draws.ancilla);
    br.block = br.kraus * rho * br.kraus.adjoint();
    br.probability = br.block.trace().real();
  }
  return select_branches(std::move(all), mode, draws.uniform, parent_weight);
}

WeightedEnsemble ensemble_from_branches(std::span<const Branch> branches) {
  std::vector<EnsembleMember> members;
  members.reserve(branches.size());
  for (const auto& b : branches) {
    members.push_back({DensityMatrix::from_trusted(b.block / b.probability), b.weight});
  }
  return WeightedEnsemble(std::move(members));
}

WeightedEnsemble backward_step(const WeightedEnsemble& ensemble,
                               const CircuitStep& step, MeasurementMode mode,
                               const RandomStream& step_stream) {
  const StepChannel channel(step);
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const MemberDraws draws = draw_member(step, step_stream, i);
    auto out = branch_member(channel, ensemble[i].state.matrix(), draws, mode,
                             ensemble[i].weight, i);
    for (auto& b : out) {
      b.kraus.resize(0, 0);
      branches.push_back(std::move(b));
    }
  }
  return ensemble_from_branches(branches);
}

BackwardPipeline::BackwardPipeline(int n_data, int n_anc, int layers, int steps,
                                   AncillaKind ancilla)
    : n_data_(n_data), n_anc_(n_anc), layers_(layers), ancilla_(ancilla),
      trained_down_to_(steps + 1) {
  if (steps < 1) throw InvalidArgument("BackwardPipeline: need T >= 1");
  ordered_.assign(static_cast<std::size_t>(steps),
                  CircuitStep(n_data, n_anc, layers, ancilla));
}

std::size_t BackwardPipeline::total_params() const {
  return parameter_count(n_data_, n_anc_, layers_, steps());
}

std::size_t BackwardPipeline::slot(int t) const {
  if (t < 1 || t > steps()) {
    throw InvalidArgument("BackwardPipeline: step " + std::to_string(t) +
                          " outside [1, " + std::to_string(steps()) + "]");
  }
  return static_cast<std::size_t>(steps() - t);
}

const CircuitStep& BackwardPipeline::step(int t) const { return ordered_[slot(t)]; }

void BackwardPipeline::set_step(int t, CircuitStep step) {
  if (step.num_data_qubits() != n_data_ || step.num_ancillas() != n_anc_ ||
      step.num_layers() != layers_ || step.ancilla_kind() != ancilla_) {
    throw InvalidArgument("BackwardPipeline: step shape differs from pipeline");
  }
  ordered_[slot(t)] = std::move(step);
}

void BackwardPipeline::mark_trained(int t) {
  slot(t);
  if (t < trained_down_to_) trained_down_to_ = t;
}

std::vector<WeightedEnsemble> generate_trace(const BackwardPipeline& pipeline,
                                             int down_to, int n_samples,
                                             MeasurementMode mode,
                                             const RandomStream& stream) {
  if (down_to < 0 || down_to >= pipeline.steps()) {
    throw InvalidArgument("generate: target step " + std::to_string(down_to) +
                          " outside [0, T)");
  }
  if (n_samples < 1) throw InvalidArgument("generate: need n_samples >= 1");
  const DensityMatrix mixed = maximally_mixed(pipeline.num_data_qubits());
  std::vector<DensityMatrix> start(static_cast<std::size_t>(n_samples), mixed);
  std::vector<WeightedEnsemble> trace;
  trace.push_back(WeightedEnsemble::uniform(start));
  for (int t = pipeline.steps(); t > down_to; --t) {
    trace.push_back(backward_step(trace.back(), pipeline.step(t), mode,
                                  stream.split(static_cast<std::uint64_t>(t))));
  }
  return trace;
}

WeightedEnsemble generate(const BackwardPipeline& pipeline, int down_to,
                          int n_samples, MeasurementMode mode,
                          const RandomStream& stream) {
  auto trace = generate_trace(pipeline, down_to, n_samples, mode, stream);
  return std::move(trace.back());
}

}  // namespace qdiffuse
