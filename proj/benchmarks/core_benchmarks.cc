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

#include <vector>

#include <benchmark/benchmark.h>

#include "qdiffuse/backward.h"
#include "qdiffuse/circuit.h"
#include "qdiffuse/losses.h"
#include "qdiffuse/tasks.h"
#include "qdiffuse/trainer.h"
#include "qdiffuse/transport.h"

namespace qdiffuse {
namespace {

void BM_SingleQubitGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix m = Matrix::Identity(Eigen::Index{1} << n, 16);
  Eigen::Matrix2cd u;
  u << 0.6, cplx(0, 0.8), cplx(0, 0.8), 0.6;
  for (auto _ : state) {
    apply_single_left(m, u, n / 2, n);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_SingleQubitGate)->Arg(6)->Arg(10);

void BM_StepGradient(benchmark::State& state) {
  const auto kind = static_cast<GradientKind>(state.range(0));
  const int n_anc = static_cast<int>(state.range(1));
  RandomStream rng(1);
  CircuitStep step(4, n_anc, 12, AncillaKind::kAllZero);
  step.set_params(init_params(InitKind::kNormal, 4, n_anc, 12, rng));
  const auto data = gen_manybody(50, rng);
  const auto mixed = std::vector(50, maximally_mixed(4));
  const auto problem = make_step_problem(WeightedEnsemble::uniform(mixed),
                                         WeightedEnsemble::uniform(data.states), step,
                                         LossKind::kMmd, MeasurementMode::kEnumerate, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(step, problem, {kind, 1e-4}));
}
BENCHMARK(BM_StepGradient)
    ->Args({static_cast<int>(GradientKind::kAdjoint), 2})
    ->Args({static_cast<int>(GradientKind::kParamShift), 2})
    ->Args({static_cast<int>(GradientKind::kAdjoint), 6})
    ->Unit(benchmark::kMillisecond);

void BM_Transport(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RandomStream rng(2);
  Eigen::MatrixXd cost(4 * n, n);
  for (Eigen::Index i = 0; i < cost.size(); ++i) cost.data()[i] = rng.uniform();
  const std::vector<double> r(static_cast<std::size_t>(4 * n), 1.0 / (4.0 * n));
  const std::vector<double> s(static_cast<std::size_t>(n), 1.0 / n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport(cost, r, s).value);
}
BENCHMARK(BM_Transport)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MeanSuperfidelity(benchmark::State& state) {
  RandomStream rng(3);
  const auto a = WeightedEnsemble::uniform(gen_manybody(static_cast<int>(state.range(0)), rng).states);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_distance(a, a, MeanEstimator::kBiased));
}
BENCHMARK(BM_MeanSuperfidelity)->Arg(100)->Arg(1000);

void BM_TfimGroundState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tfim_ground_state(n, 2.0, Boundary::kOpen));
}
BENCHMARK(BM_TfimGroundState)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qdiffuse

BENCHMARK_MAIN();
