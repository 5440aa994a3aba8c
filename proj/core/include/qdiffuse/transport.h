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

#ifndef QDIFFUSE_TRANSPORT_H_
#define QDIFFUSE_TRANSPORT_H_

#include <span>

#include <Eigen/Dense>

namespace qdiffuse {

struct TransportPlan {
  Eigen::MatrixXd plan;        // rows x cols, nonnegative
  double value = 0.0;          // <plan, cost>
  // Optimal duals: row_potential(i) + col_potential(j) <= cost(i, j) with
  // equality on the basis; row_potential(0) == 0.
  Eigen::VectorXd row_potential;
  Eigen::VectorXd col_potential;
  int pivots = 0;
};

// Exact discrete optimal transport
//   min <P, C>  s.t.  P 1 = r,  P^T 1 = s,  P >= 0
// by the transportation simplex: matrix-minimum starting basis, potentials on the
// spanning-tree basis, block-search pricing, cycle pivoting. After a run of
// degenerate pivots entering and leaving cells are chosen by Bland's
// smallest-index rule, which rules out cycling.
//
// r and s must be nonnegative and each sum to 1 within 1e-9.
TransportPlan solve_transport(const Eigen::MatrixXd& cost,
                              std::span<const double> r,
                              std::span<const double> s);

}  // namespace qdiffuse

#endif  // QDIFFUSE_TRANSPORT_H_
