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

#ifndef QDIFFUSE_TRAINER_H_
#define QDIFFUSE_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qdiffuse/backward.h"
#include "qdiffuse/circuit.h"
#include "qdiffuse/ensemble.h"
#include "qdiffuse/forward.h"
#include "qdiffuse/losses.h"
#include "qdiffuse/random.h"

namespace qdiffuse {

enum class InitKind {
  kNormal,  // every angle ~ N(0, 1)
  kXavier,  // data wires ~ N(0, 1/(n_data + n_anc)), ancilla wires ~ N(0, 1)
};

// Flat angles in CircuitStep order.
std::vector<double> init_params(InitKind kind, int n_data, int n_anc, int layers,
                                RandomStream& rng);

struct AdamOptions {
  double learning_rate = 0.05;
  double decay = 0.99;  // multiplies the rate once per iteration
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t size, AdamOptions options);

  // Rate used by the next update: learning_rate * decay^iteration.
  double learning_rate() const;
  std::uint64_t iteration() const { return iteration_; }
  const AdamOptions& options() const { return options_; }

  // Throws NumericalError on a non-finite gradient; theta is left untouched.
  void update(std::span<double> theta, std::span<const double> grad);

 private:
  AdamOptions options_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t iteration_ = 0;
};

enum class LossKind { kMmd, kWasserstein };

// One step's training problem: the inputs to the step, the target ensemble,
// and the randomness each input member consumes. Holding the draws fixed
// makes the loss a deterministic function of the angles.
struct StepProblem {
  WeightedEnsemble inputs;
  WeightedEnsemble targets;
  std::vector<MemberDraws> draws;
  LossKind loss = LossKind::kMmd;
  MeasurementMode mode = MeasurementMode::kEnumerate;
  MeanEstimator estimator = MeanEstimator::kBiased;  // MMD only
};

StepProblem make_step_problem(WeightedEnsemble inputs, WeightedEnsemble targets,
                              const CircuitStep& shape, LossKind loss,
                              MeasurementMode mode, const RandomStream& step_stream);

// Output ensemble of `step` applied to the problem's inputs.
WeightedEnsemble step_output(const CircuitStep& step, const StepProblem& problem);
double step_loss(const CircuitStep& step, const StepProblem& problem);

enum class GradientKind {
  kCentralFd,   // two loss evaluations per angle at theta +- h
  kParamShift,  // +-pi/2 shifts of each branch block; enumerate mode only
  kAdjoint,     // one reverse sweep over the gate list
};

// (f(theta + h e_k) - f(theta - h e_k)) / 2h for every k. Any randomness f
// uses must be fixed inside f for the differences to be meaningful.
std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> theta, double h);

struct GradientEngine {
  GradientKind kind = GradientKind::kAdjoint;
  double fd_step = 1e-4;
};

struct StepEvaluation {
  double loss = 0.0;
  std::vector<double> gradient;
  WeightedEnsemble output;
};

StepEvaluation evaluate_step(const CircuitStep& step, const StepProblem& problem,
                             const GradientEngine& engine);

inline std::vector<double> gradient(const CircuitStep& step,
                                    const StepProblem& problem,
                                    const GradientEngine& engine) {
  return evaluate_step(step, problem, engine).gradient;
}

struct TrainOptions {
  int n_anc = 2;
  int layers = 4;
  AncillaKind ancilla = AncillaKind::kAllZero;
  InitKind init = InitKind::kXavier;
  LossKind loss = LossKind::kMmd;
  GradientEngine engine;
  MeasurementMode mode = MeasurementMode::kEnumerate;
  AdamOptions adam;
  int iterations = 200;
  MeanEstimator estimator = MeanEstimator::kBiased;
  // Called before each update with the step's current output ensemble.
  std::function<void(int t, int iteration, const WeightedEnsemble& output)> observer;
};

struct StepRecord {
  int step = 0;
  std::vector<double> loss;           // before each update
  std::vector<double> learning_rate;  // used by each update
  double final_loss = 0.0;            // after the last update
  std::vector<double> params;
  double seconds = 0.0;               // wall clock, not reproducible
};

struct TrainRecord {
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;  // in training order, t = T first
};

// Sub-stream of the run stream from which step t's training inputs and the
// step's own member draws are taken.
RandomStream training_stream(const RandomStream& run);

// Trains block t in place. Requires every block above t to be trained
// already; blocks above t are not modified.
StepRecord train_step(int t, BackwardPipeline& pipeline,
                      const ForwardTrajectory& trajectory,
                      const TrainOptions& options, const RandomStream& run);

struct TrainResult {
  BackwardPipeline pipeline;
  TrainRecord record;
};

TrainResult train_pipeline(const ForwardTrajectory& trajectory,
                           const TrainOptions& options, const RandomStream& run);

}  // namespace qdiffuse

#endif  // QDIFFUSE_TRAINER_H_
