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

#include "qdiffuse/transport.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

Eigen::MatrixXd RandomCost(int rows, int cols, RandomStream& rng) {
  Eigen::MatrixXd c(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) c(i, j) = rng.uniform();
  }
  return c;
}

std::vector<double> RandomMarginal(int size, RandomStream& rng) {
  std::vector<double> w(static_cast<std::size_t>(size));
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return w;
}

TEST(SolveTransport, SingleCell) {
  Eigen::MatrixXd c(1, 1);
  c << 0.3;
  const auto plan = solve_transport(c, std::vector{1.0}, std::vector{1.0});
  EXPECT_DOUBLE_EQ(plan.plan(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(plan.value, 0.3);
}

TEST(SolveTransport, DiagonalIsFree) {
  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  const auto plan = solve_transport(c, std::vector{0.5, 0.5}, std::vector{0.5, 0.5});
  EXPECT_DOUBLE_EQ(plan.value, 0.0);
  EXPECT_DOUBLE_EQ(plan.plan(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(plan.plan(0, 1), 0.0);
}

TEST(SolveTransport, MatchesPermutationBruteForce) {
  RandomStream rng(70);
  for (int n = 1; n <= 6; ++n) {
    const std::vector<double> u(static_cast<std::size_t>(n), 1.0 / n);
    for (int k = 0; k < 50; ++k) {
      const auto c = RandomCost(n, n, rng);
      const auto plan = solve_transport(c, u, u);
      ASSERT_NEAR(plan.value, testing::brute_force_assignment(c), 1e-9) << n << " " << k;
    }
  }
}

TEST(SolveTransport, RectangularCertificate) {
  RandomStream rng(71);
  for (int k = 0; k < 200; ++k) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 8);
    int cols = 1 + static_cast<int>(rng.uniform() * 8);
    if (cols == rows) cols = rows % 8 + 1;
    const auto c = RandomCost(rows, cols, rng);
    const auto r = RandomMarginal(rows, rng);
    const auto s = RandomMarginal(cols, rng);
    const auto plan = solve_transport(c, r, s);
    EXPECT_LE(testing::transport_certificate_gap(c, r, s, plan.plan, plan.row_potential,
                                                 plan.col_potential),
              1e-8);
    EXPECT_NEAR(plan.value, (plan.plan.array() * c.array()).sum(), 1e-12);
  }
}

TEST(SolveTransport, DegenerateTiesTerminate) {
  // Integer costs and equal marginals produce many degenerate pivots.
  RandomStream rng(72);
  for (int k = 0; k < 20; ++k) {
    const int n = 20 + k;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = std::floor(rng.uniform() * 3);
    }
    const std::vector<double> u(static_cast<std::size_t>(n), 1.0 / n);
    const auto plan = solve_transport(c, u, u);
    EXPECT_LE(testing::transport_certificate_gap(c, u, u, plan.plan, plan.row_potential,
                                                 plan.col_potential),
              1e-9);
  }
}

TEST(SolveTransport, LargeInstanceCertificate) {
  RandomStream rng(73);
  const auto c = RandomCost(400, 100, rng);
  const auto r = RandomMarginal(400, rng);
  const auto s = RandomMarginal(100, rng);
  const auto plan = solve_transport(c, r, s);
  EXPECT_LE(testing::transport_certificate_gap(c, r, s, plan.plan, plan.row_potential,
                                               plan.col_potential),
            1e-9);
}

TEST(SolveTransport, RejectsInfeasibleMarginals) {
  const Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(solve_transport(c, std::vector{0.5, 0.4}, std::vector{0.5, 0.5}),
               InvalidArgument);
  EXPECT_THROW(solve_transport(c, std::vector{1.5, -0.5}, std::vector{0.5, 0.5}),
               InvalidArgument);
  EXPECT_THROW(solve_transport(c, std::vector{1.0}, std::vector{0.5, 0.5}),
               InvalidArgument);
}

}  // namespace
}  // namespace qdiffuse
