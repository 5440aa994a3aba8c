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

#include "qdiffuse/trainer.h"

#include <chrono>
#include <cmath>
#include <string>

#include "qdiffuse/errors.h"
#include "qdiffuse/losses.h"

namespace qdiffuse {
namespace {

constexpr double kHalfPi = 1.5707963267948966;

struct ForwardPass {
  std::vector<Branch> branches;
  std::vector<double> kept_mass;  // per input member
  WeightedEnsemble output;
};

ForwardPass run_forward(const StepChannel& channel, const StepProblem& problem) {
  ForwardPass f;
  f.kept_mass.reserve(problem.inputs.size());
  for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
    auto out = branch_member(channel, problem.inputs[i].state.matrix(),
                             problem.draws[i], problem.mode,
                             problem.inputs[i].weight, i);
    double mass = 0.0;
    for (const auto& b : out) mass += b.probability;
    f.kept_mass.push_back(mass);
    for (auto& b : out) f.branches.push_back(std::move(b));
  }
  f.output = ensemble_from_branches(f.branches);
  return f;
}

double loss_value(const WeightedEnsemble& out, const StepProblem& problem) {
  return problem.loss == LossKind::kMmd
             ? mmd_distance(out, problem.targets, problem.estimator)
             : wasserstein(out, problem.targets);
}

LossGradient loss_gradient(const WeightedEnsemble& out, const StepProblem& problem) {
  return problem.loss == LossKind::kMmd
             ? mmd_gradient(out, problem.targets, problem.estimator)
             : wasserstein_gradient(out, problem.targets);
}

// Lambda_k such that dL = sum_k Re Tr(Lambda_k dB_k), where B_k is branch k's
// unnormalized block. Folds in the normalization B/p and, when enumerating,
// the dependence of branch weights on the Born probabilities.
std::vector<Matrix> block_sensitivities(const ForwardPass& f, const LossGradient& g,
                                        const StepProblem& problem) {
  const bool enumerate = problem.mode == MeasurementMode::kEnumerate;
  std::vector<double> mean_weight_grad(problem.inputs.size(), 0.0);
  if (enumerate) {
    for (std::size_t k = 0; k < f.branches.size(); ++k) {
      const auto& b = f.branches[k];
      mean_weight_grad[b.source] += g.weight[k] * b.probability / f.kept_mass[b.source];
    }
  }
  std::vector<Matrix> lambda;
  lambda.reserve(f.branches.size());
  for (std::size_t k = 0; k < f.branches.size(); ++k) {
    const auto& b = f.branches[k];
    const double p = b.probability;
    double shift = -trace_product(g.state[k], b.block) / (p * p);
    if (enumerate) {
      const double z = f.kept_mass[b.source];
      shift += problem.inputs[b.source].weight *
               (g.weight[k] - mean_weight_grad[b.source]) / z;
    }
    Matrix l = g.state[k] / p;
    l.diagonal().array() += shift;
    lambda.push_back(std::move(l));
  }
  return lambda;
}

Eigen::Matrix2cd pauli(Gate::Kind kind) {
  Eigen::Matrix2cd p;
  if (kind == Gate::Kind::kRx) {
    p << 0.0, 1.0, 1.0, 0.0;
  } else {
    p << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  }
  return p;
}

std::vector<double> adjoint_gradient(const CircuitStep& step, const StepChannel& channel,
                                     const ForwardPass& f,
                                     const std::vector<Matrix>& lambda,
                                     const StepProblem& problem) {
  const Eigen::Index d = channel.data_dim();
  const Eigen::Index outcomes = channel.outcomes();
  const int m = channel.subspace_dim();
  const int n = step.num_qubits();

  // dL = 2 Re Tr(dV Y) with Y = sum_k C rho K^dagger Lambda S_b.
  Matrix y = Matrix::Zero(d * m, d * outcomes);
  for (std::size_t k = 0; k < f.branches.size(); ++k) {
    const auto& b = f.branches[k];
    const Matrix z = problem.inputs[b.source].state.matrix() * b.kraus.adjoint() * lambda[k];
    const Vector& c = problem.draws[b.source].ancilla;
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::Index col = r * outcomes + b.outcome;
      for (Eigen::Index j = 0; j < d; ++j) {
        for (int mu = 0; mu < m; ++mu) y(j * m + mu, col) += c(mu) * z(j, r);
      }
    }
  }

  const auto gates = gate_sequence(step);
  std::vector<double> grad(step.num_params(), 0.0);
  Matrix forward = channel.restricted_unitary();
  Matrix adjoint = std::move(y);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    const Gate& gate = *it;
    if (gate.kind == Gate::Kind::kCz) {
      apply_cz_left(forward, gate.qubit, gate.other, n);
      apply_cz_right(adjoint, gate.qubit, gate.other, n);
      continue;
    }
    Matrix shifted = forward;
    apply_single_left(shifted, pauli(gate.kind), gate.qubit, n);
    const cplx tr = (shifted.array() * adjoint.transpose().array()).sum();
    grad[static_cast<std::size_t>(gate.param)] += tr.imag();
    const double theta = step.params()[static_cast<std::size_t>(gate.param)];
    apply_single_left(forward, rotation_matrix(gate.kind, -theta), gate.qubit, n);
    apply_single_right(adjoint, rotation_matrix(gate.kind, theta), gate.qubit, n);
  }
  return grad;
}

std::vector<double> param_shift_gradient(const CircuitStep& step, const ForwardPass& f,
                                         const std::vector<Matrix>& lambda,
                                         const StepProblem& problem) {
  std::vector<double> grad(step.num_params(), 0.0);
  std::vector<double> shifted(step.params().begin(), step.params().end());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    const double theta = shifted[k];
    for (double sign : {1.0, -1.0}) {
      shifted[k] = theta + sign * kHalfPi;
      CircuitStep moved = step;
      moved.set_params(shifted);
      const StepChannel channel(moved);
      double acc = 0.0;
      for (std::size_t j = 0; j < f.branches.size(); ++j) {
        const auto& b = f.branches[j];
        const Matrix kraus = channel.kraus(b.outcome, problem.draws[b.source].ancilla);
        const Matrix block =
            kraus * problem.inputs[b.source].state.matrix() * kraus.adjoint();
        acc += sign * trace_product(lambda[j], block);
      }
      grad[k] += 0.5 * acc;
    }
    shifted[k] = theta;
  }
  return grad;
}

}  // namespace

std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> theta, double h) {
  if (!(h > 0.0)) throw InvalidArgument("central_difference: step must be > 0");
  std::vector<double> grad(theta.size(), 0.0);
  std::vector<double> shifted(theta.begin(), theta.end());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    shifted[k] = theta[k] + h;
    const double up = f(shifted);
    shifted[k] = theta[k] - h;
    const double down = f(shifted);
    shifted[k] = theta[k];
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<double> init_params(InitKind kind, int n_data, int n_anc, int layers,
                                RandomStream& rng) {
  const CircuitStep shape(n_data, n_anc, layers, AncillaKind::kAllZero);
  std::vector<double> params(shape.num_params());
  const double data_sd =
      kind == InitKind::kXavier ? 1.0 / std::sqrt(static_cast<double>(n_data + n_anc))
                                : 1.0;
  const int nq = n_data + n_anc;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < nq; ++q) {
      const double sd = q < n_data ? data_sd : 1.0;
      for (Axis axis : {Axis::kX, Axis::kY}) {
        params[shape.param_index(l, q, axis)] = rng.normal(0.0, sd);
      }
    }
  }
  return params;
}

AdamOptimizer::AdamOptimizer(std::size_t size, AdamOptions options)
    : options_(options), m_(size, 0.0), v_(size, 0.0) {
  if (!(options.learning_rate > 0.0) || !(options.decay > 0.0) ||
      !(options.beta1 >= 0.0 && options.beta1 < 1.0) ||
      !(options.beta2 >= 0.0 && options.beta2 < 1.0) || !(options.epsilon > 0.0)) {
    throw InvalidArgument("AdamOptimizer: invalid options");
  }
}

double AdamOptimizer::learning_rate() const {
  return options_.learning_rate *
         std::pow(options_.decay, static_cast<double>(iteration_));
}

void AdamOptimizer::update(std::span<double> theta, std::span<const double> grad) {
  if (theta.size() != m_.size() || grad.size() != m_.size()) {
    throw InvalidArgument("AdamOptimizer::update: size mismatch");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalError("AdamOptimizer: non-finite gradient");
  }
  const double lr = learning_rate();
  ++iteration_;
  const double t = static_cast<double>(iteration_);
  const double c1 = 1.0 - std::pow(options_.beta1, t);
  const double c2 = 1.0 - std::pow(options_.beta2, t);
  for (std::size_t k = 0; k < grad.size(); ++k) {
    m_[k] = options_.beta1 * m_[k] + (1.0 - options_.beta1) * grad[k];
    v_[k] = options_.beta2 * v_[k] + (1.0 - options_.beta2) * grad[k] * grad[k];
    theta[k] -= lr * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + options_.epsilon);
  }
}

StepProblem make_step_problem(WeightedEnsemble inputs, WeightedEnsemble targets,
                              const CircuitStep& shape, LossKind loss,
                              MeasurementMode mode, const RandomStream& step_stream) {
  if (inputs.empty() || targets.empty()) {
    throw InvalidArgument("make_step_problem: empty ensemble");
  }
  const Eigen::Index d = Eigen::Index{1} << shape.num_data_qubits();
  if (inputs.dim() != d || targets.dim() != d) {
    throw InvalidArgument("make_step_problem: ensembles do not match the data register");
  }
  StepProblem p;
  p.draws.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    p.draws.push_back(draw_member(shape, step_stream, i));
  }
  p.inputs = std::move(inputs);
  p.targets = std::move(targets);
  p.loss = loss;
  p.mode = mode;
  return p;
}

WeightedEnsemble step_output(const CircuitStep& step, const StepProblem& problem) {
  return run_forward(StepChannel(step), problem).output;
}

double step_loss(const CircuitStep& step, const StepProblem& problem) {
  return loss_value(step_output(step, problem), problem);
}

StepEvaluation evaluate_step(const CircuitStep& step, const StepProblem& problem,
                             const GradientEngine& engine) {
  if (problem.draws.size() != problem.inputs.size()) {
    throw InvalidArgument("evaluate_step: draws do not match inputs");
  }
  StepEvaluation out;
  if (engine.kind == GradientKind::kCentralFd) {
    out.output = step_output(step, problem);
    out.loss = loss_value(out.output, problem);
    CircuitStep moved = step;
    out.gradient = central_difference(
        [&](std::span<const double> theta) {
          moved.set_params(theta);
          return step_loss(moved, problem);
        },
        step.params(), engine.fd_step);
    return out;
  }
  if (engine.kind == GradientKind::kParamShift &&
      problem.mode != MeasurementMode::kEnumerate) {
    throw InvalidArgument("parameter shift requires enumerate measurement mode");
  }
  const StepChannel channel(step);
  ForwardPass f = run_forward(channel, problem);
  const LossGradient g = loss_gradient(f.output, problem);
  const auto lambda = block_sensitivities(f, g, problem);
  out.loss = g.value;
  out.gradient = engine.kind == GradientKind::kAdjoint
                     ? adjoint_gradient(step, channel, f, lambda, problem)
                     : param_shift_gradient(step, f, lambda, problem);
  out.output = std::move(f.output);
  return out;
}

RandomStream training_stream(const RandomStream& run) {
  return run.split(StreamTag::kTrain);
}

StepRecord train_step(int t, BackwardPipeline& pipeline,
                      const ForwardTrajectory& trajectory,
                      const TrainOptions& options, const RandomStream& run) {
  const int steps = pipeline.steps();
  if (trajectory.steps() != steps) {
    throw InvalidArgument("train_step: trajectory has " +
                          std::to_string(trajectory.steps()) + " steps, pipeline " +
                          std::to_string(steps));
  }
  if (t < 1 || t > steps) {
    throw InvalidArgument("train_step: step " + std::to_string(t) + " out of range");
  }
  if (pipeline.trained_down_to() != t + 1) {
    throw InvalidArgument("train_step: step " + std::to_string(t) +
                          " requested but training has reached step " +
                          std::to_string(pipeline.trained_down_to()));
  }
  if (options.iterations < 0) throw InvalidArgument("train_step: negative iterations");
  const auto start = std::chrono::steady_clock::now();

  const RandomStream stream = training_stream(run);
  const auto& data_targets = trajectory.at(t - 1);
  const int n_train = static_cast<int>(data_targets.size());
  WeightedEnsemble inputs;
  if (t == steps) {
    const std::vector<DensityMatrix> mixed(
        data_targets.size(), maximally_mixed(pipeline.num_data_qubits()));
    inputs = WeightedEnsemble::uniform(mixed);
  } else {
    inputs = generate(pipeline, t, n_train, MeasurementMode::kStochastic, stream);
  }

  CircuitStep step = pipeline.step(t);
  RandomStream init_rng = run.split(StreamTag::kInit, static_cast<std::uint64_t>(t));
  step.set_params(init_params(options.init, pipeline.num_data_qubits(),
                              pipeline.num_ancillas(), pipeline.num_layers(), init_rng));

  StepProblem problem = make_step_problem(
      std::move(inputs), WeightedEnsemble::uniform(data_targets), step, options.loss,
      options.mode, stream.split(static_cast<std::uint64_t>(t)));
  problem.estimator = options.estimator;

  StepRecord rec;
  rec.step = t;
  AdamOptimizer adam(step.num_params(), options.adam);
  std::vector<double> theta(step.params().begin(), step.params().end());
  for (int it = 0; it < options.iterations; ++it) {
    const StepEvaluation ev = evaluate_step(step, problem, options.engine);
    if (!std::isfinite(ev.loss)) throw NumericalError("train_step: non-finite loss");
    if (options.observer) options.observer(t, it, ev.output);
    rec.loss.push_back(ev.loss);
    rec.learning_rate.push_back(adam.learning_rate());
    adam.update(theta, ev.gradient);
    step.set_params(theta);
  }
  rec.final_loss = step_loss(step, problem);
  rec.params = theta;
  pipeline.set_step(t, std::move(step));
  pipeline.mark_trained(t);
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

TrainResult train_pipeline(const ForwardTrajectory& trajectory,
                           const TrainOptions& options, const RandomStream& run) {
  const auto& data = trajectory.at(0);
  if (data.empty()) throw InvalidArgument("train_pipeline: empty dataset");
  TrainResult result;
  result.pipeline = BackwardPipeline(data.front().num_qubits(), options.n_anc,
                                     options.layers, trajectory.steps(), options.ancilla);
  result.record.seed = run.key();
  for (int t = trajectory.steps(); t >= 1; --t) {
    result.record.steps.push_back(
        train_step(t, result.pipeline, trajectory, options, run));
  }
  return result;
}

}  // namespace qdiffuse
