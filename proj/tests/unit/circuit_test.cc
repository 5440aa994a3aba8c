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

#include "qdiffuse/circuit.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.h"
#include "qdiffuse/errors.h"
#include "qdiffuse/trainer.h"

namespace qdiffuse {
namespace {

CircuitStep RandomStep(int n_data, int n_anc, int layers, RandomStream& rng) {
  CircuitStep step(n_data, n_anc, layers, AncillaKind::kAllZero);
  step.set_params(init_params(InitKind::kNormal, n_data, n_anc, layers, rng));
  return step;
}

TEST(ParameterCount, ReferenceConfigurations) {
  EXPECT_EQ(parameter_count(4, 2, 12, 6), 864u);
  EXPECT_EQ(parameter_count(4, 6, 21, 2), 840u);
  EXPECT_EQ(parameter_count(1, 2, 4, 6), 144u);
}

TEST(CircuitStep, ShapeAndIndexing) {
  CircuitStep step(2, 1, 3, AncillaKind::kAllZero);
  EXPECT_EQ(step.num_params(), 3u * 3u * 2u);
  std::vector<double> p(step.num_params());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<double>(k);
  step.set_params(p);
  EXPECT_EQ(step.angle(0, 0, Axis::kX), 0.0);
  EXPECT_EQ(step.angle(0, 0, Axis::kY), 1.0);
  EXPECT_EQ(step.angle(0, 1, Axis::kX), 2.0);
  EXPECT_EQ(step.angle(1, 0, Axis::kX), 6.0);
  EXPECT_EQ(step.angle(2, 2, Axis::kY), 17.0);
  EXPECT_THROW(step.angle(3, 0, Axis::kX), InvalidArgument);
}

TEST(CircuitStep, RejectsBadParameters) {
  CircuitStep step(1, 1, 1, AncillaKind::kAllZero);
  EXPECT_THROW(step.set_params(std::vector<double>(3, 0.0)), InvalidArgument);
  std::vector<double> p(4, 0.0);
  p[2] = std::nan("");
  EXPECT_THROW(step.set_params(p), NumericalError);
  EXPECT_THROW(CircuitStep(0, 1, 1, AncillaKind::kAllZero), InvalidArgument);
}

TEST(GateSequence, LayerOrder) {
  const CircuitStep step(2, 1, 1, AncillaKind::kAllZero);
  const auto gates = gate_sequence(step);
  ASSERT_EQ(gates.size(), 3u * 2u + 2u);
  EXPECT_EQ(gates[0].kind, Gate::Kind::kRx);
  EXPECT_EQ(gates[1].kind, Gate::Kind::kRy);
  EXPECT_EQ(gates[1].qubit, 0);
  EXPECT_EQ(gates[2].qubit, 1);
  EXPECT_EQ(gates[6].kind, Gate::Kind::kCz);
  EXPECT_EQ(gates[6].qubit, 0);
  EXPECT_EQ(gates[6].other, 1);
  EXPECT_EQ(gates[7].qubit, 1);
  EXPECT_EQ(gates[7].other, 2);
}

TEST(StepUnitary, ZeroAnglesLeaveOnlyTheCzChain) {
  const CircuitStep step(2, 1, 2, AncillaKind::kAllZero);
  const Matrix u = step_unitary(step);
  const Matrix chain = testing::full_cz(0, 1, 3) * testing::full_cz(1, 2, 3);
  EXPECT_LE((u - chain * chain).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix one = step_unitary(CircuitStep(2, 1, 1, AncillaKind::kAllZero));
  EXPECT_LE((one - chain).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((one * one.adjoint() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepUnitary, MatchesGateByGateProduct) {
  RandomStream rng(40);
  for (int k = 0; k < 30; ++k) {
    const auto step = RandomStep(1 + k % 3, 1 + k % 2, 1 + k % 3, rng);
    const Matrix got = step_unitary(step);
    const Matrix want = testing::gate_by_gate_unitary(step);
    ASSERT_LE((got - want).cwiseAbs().maxCoeff(), 1e-10) << k;
  }
}

TEST(ApplyStepUnitary, XRotationByPiFlipsTheQubit) {
  CircuitStep step(1, 0, 1, AncillaKind::kAllZero);
  step.set_params(std::vector<double>{std::numbers::pi, 0.0});
  const auto out = apply_step_unitary(density_from_pure(PureState::basis(1, 0)), step);
  EXPECT_NEAR(out(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out(0, 0)), 0.0, 1e-15);
}

TEST(ApplyStepUnitary, PreservesPurityAndInvariants) {
  RandomStream rng(41);
  for (int k = 0; k < 30; ++k) {
    const auto step = RandomStep(2, 1, 2, rng);
    const auto rho = testing::random_density(3, rng);
    const auto out = apply_step_unitary(rho, step);
    EXPECT_TRUE(inspect_state(out.matrix()).within());
    EXPECT_NEAR(purity(out), purity(rho), 1e-10);
  }
  EXPECT_THROW(apply_step_unitary(maximally_mixed(2), RandomStep(2, 1, 1, rng)),
               InvalidArgument);
}

TEST(RotationMatrix, HalfAngleConvention) {
  const auto rx = rotation_matrix(Gate::Kind::kRx, 0.4);
  EXPECT_NEAR(rx(0, 0).real(), std::cos(0.2), 1e-15);
  EXPECT_NEAR(rx(0, 1).imag(), -std::sin(0.2), 1e-15);
  const auto ry = rotation_matrix(Gate::Kind::kRy, 0.4);
  EXPECT_NEAR(ry(1, 0).real(), std::sin(0.2), 1e-15);
  EXPECT_THROW(rotation_matrix(Gate::Kind::kCz, 0.1), InvalidArgument);
}

}  // namespace
}  // namespace qdiffuse
