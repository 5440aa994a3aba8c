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

#include "qdiffuse/tasks.h"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.h"
#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

double GroundEnergy(int n, double g, Boundary b) {
  const auto psi = tfim_ground_state(n, g, b);
  const Matrix h = tfim_hamiltonian(n, g, b).cast<cplx>();
  return (psi.amplitudes().adjoint() * h * psi.amplitudes())(0, 0).real();
}

// Reference energies and magnetizations come from a separate dense
// diagonalization written against numpy.
TEST(Tfim, FrozenGroundStates) {
  EXPECT_NEAR(GroundEnergy(4, 2.0, Boundary::kOpen), -8.3767986368503582, 1e-10);
  EXPECT_NEAR(GroundEnergy(4, 2.0, Boundary::kPeriodic), -8.5431168202794296, 1e-10);
  EXPECT_NEAR(GroundEnergy(2, 100.0, Boundary::kOpen), -200.00249998437519, 1e-9);
  const auto rho = density_from_pure(tfim_ground_state(4, 2.0, Boundary::kOpen));
  EXPECT_NEAR(magnetization_x(rho), 0.95249640631067312, 1e-10);
}

TEST(Tfim, HamiltonianIsSymmetricAndSized) {
  const auto h = tfim_hamiltonian(3, 1.3, Boundary::kPeriodic);
  ASSERT_EQ(h.rows(), 8);
  EXPECT_LT((h - h.transpose()).norm(), 1e-15);
  // Diagonal of -sum ZZ on a 3-ring: all-aligned basis states give -3.
  EXPECT_DOUBLE_EQ(h(0, 0), -3.0);
  EXPECT_DOUBLE_EQ(h(7, 7), -3.0);
  // Two-site chains have one bond under either boundary.
  EXPECT_EQ(tfim_hamiltonian(2, 0.5, Boundary::kOpen),
            tfim_hamiltonian(2, 0.5, Boundary::kPeriodic));
}

TEST(Tfim, GroundStateSignAndNorm) {
  const auto psi = tfim_ground_state(4, 1.9, Boundary::kOpen);
  Eigen::Index arg = 0;
  psi.amplitudes().cwiseAbs().maxCoeff(&arg);
  EXPECT_GT(psi.amplitudes()(arg).real(), 0.0);
  EXPECT_NEAR(psi.amplitudes()(arg).imag(), 0.0, 1e-15);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
}

TEST(Tfim, DegenerateGroundStateIsRejected) {
  EXPECT_THROW(tfim_ground_state(4, 0.0, Boundary::kOpen), NumericalError);
}

TEST(Tfim, PeriodicChainHasLowerMagnetization) {
  // Over the training field range the open chain's mean M_x is 0.952 and the
  // ring's is 0.921.
  const auto spec_open = default_task(TaskKind::kManyBody);
  auto spec_ring = spec_open;
  spec_ring.boundary = Boundary::kPeriodic;
  const RandomStream rng(11);
  const auto open = generate_dataset(spec_open, 200, rng);
  const auto ring = generate_dataset(spec_ring, 200, rng);
  EXPECT_EQ(open.g, ring.g);
  const auto mo = mean_magnetization_x(WeightedEnsemble::uniform(open.states));
  const auto mr = mean_magnetization_x(WeightedEnsemble::uniform(ring.states));
  EXPECT_NEAR(mo.mean, 0.952007, 2e-3);
  EXPECT_NEAR(mr.mean, 0.921427, 3e-3);
  for (const auto& s : open.states) {
    const double m = magnetization_x(s);
    EXPECT_GE(m, 0.9412 - 1e-4);
    EXPECT_LE(m, 0.9608 + 1e-4);
  }
}

TEST(Datasets, ClusteredStatesAreNearZero) {
  const auto d = gen_clustered(500, RandomStream(12));
  ASSERT_EQ(d.states.size(), 500u);
  ASSERT_EQ(d.q0.size(), 500u);
  for (double q : d.q0) {
    EXPECT_GE(q, 0.0);
    EXPECT_LT(q, 0.01);
  }
  const auto f = mean_fidelity_to_zero(WeightedEnsemble::uniform(d.states));
  // Population mean is 0.985078 for epsilon0 = 0.08 and q0 ~ U[0, 0.01).
  EXPECT_NEAR(f.mean, 0.985078, 4 * f.standard_error + 1e-4);
}

TEST(Datasets, CircularStatesLieInTheXzPlane) {
  const auto d = gen_circular(100, RandomStream(13));
  ASSERT_EQ(d.theta0.size(), 100u);
  for (std::size_t i = 0; i < d.states.size(); ++i) {
    const auto b = bloch_coordinates(d.states[i]);
    EXPECT_NEAR(b.y, 0.0, 1e-12);
    EXPECT_NEAR(std::atan2(b.x, b.z), std::remainder(d.theta0[i], 2 * M_PI), 1e-9);
    EXPECT_NEAR(b.norm(), 1.0 - d.q0[i], 1e-12);
  }
}

TEST(Datasets, PrefixStable) {
  const RandomStream rng(14);
  const auto short_set = gen_manybody(5, rng);
  const auto long_set = gen_manybody(9, rng);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(short_set.g[i], long_set.g[i]);
    EXPECT_EQ(short_set.states[i].matrix(), long_set.states[i].matrix());
  }
}

TEST(Names, RoundTrip) {
  for (auto k : {TaskKind::kClustered, TaskKind::kCircular, TaskKind::kManyBody}) {
    EXPECT_EQ(parse_task(task_name(k)), k);
  }
  for (auto b : {Boundary::kOpen, Boundary::kPeriodic}) {
    EXPECT_EQ(parse_boundary(boundary_name(b)), b);
  }
  EXPECT_THROW(parse_task("spiral"), InvalidArgument);
  EXPECT_THROW(parse_boundary("twisted"), InvalidArgument);
}

TEST(WeightedMean, UniformWeightsGiveTheTextbookError) {
  const std::vector<double> v = {1.0, 2.0, 4.0, 7.0};
  const auto r = weighted_mean(v, std::vector<double>(4, 0.25));
  EXPECT_DOUBLE_EQ(r.mean, 3.5);
  // Sample variance 7, n = 4.
  EXPECT_NEAR(r.standard_error, std::sqrt(7.0 / 4.0), 1e-12);
}

TEST(WeightedMean, SingleMemberHasNoError) {
  const auto r = weighted_mean({0.3}, {1.0});
  EXPECT_EQ(r.mean, 0.3);
  EXPECT_EQ(r.standard_error, 0.0);
}

TEST(Histogram, MassAndEdges) {
  const auto plus = density_from_pure(
      PureState::from_amplitudes((Vector(2) << 1.0, 1.0).finished() / std::sqrt(2.0)));
  const auto minus = density_from_pure(
      PureState::from_amplitudes((Vector(2) << 1.0, -1.0).finished() / std::sqrt(2.0)));
  const auto zero = density_from_pure(PureState::basis(1, 0));
  const WeightedEnsemble e({{plus, 0.5}, {minus, 0.2}, {zero, 0.3}});
  const auto h = mx_histogram(e, 10);
  ASSERT_EQ(h.mass.size(), 10u);
  EXPECT_NEAR(h.mass[9], 0.5, 1e-15);
  EXPECT_NEAR(h.mass[0], 0.2, 1e-15);
  EXPECT_NEAR(h.mass[5], 0.3, 1e-15);
  double total = 0.0;
  for (double m : h.mass) total += m;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(h.bin_center(0), -0.9);
  EXPECT_THROW(mx_histogram(e, 0), InvalidArgument);
}

}  // namespace
}  // namespace qdiffuse
