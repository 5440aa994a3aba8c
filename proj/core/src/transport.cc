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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

constexpr double kMarginalTolerance = 1e-9;
constexpr double kReducedCostTolerance = 1e-12;
// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr int kDegenerateRunLimit = 32;

void check_marginal(std::span<const double> m, const char* name) {
  double total = 0.0;
  for (double x : m) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string("solve_transport: ") + name +
                            " has a negative or non-finite entry");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kMarginalTolerance) {
    throw InvalidArgument(std::string("solve_transport: ") + name +
                          " sums to " + std::to_string(total) + ", not 1");
  }
}

// Basis of a transportation problem as a spanning tree on row nodes
// [0, m) and column nodes [m, m + n).
class Basis {
 public:
  Basis(int m, int n) : m_(m), n_(n), adj_(static_cast<std::size_t>(m + n)),
                        is_basic_(static_cast<std::size_t>(m) * n, 0),
                        flow_(static_cast<std::size_t>(m) * n, 0.0) {}

  std::size_t cell(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  bool basic(int i, int j) const { return is_basic_[cell(i, j)] != 0; }
  double& flow(int i, int j) { return flow_[cell(i, j)]; }
  double flow(int i, int j) const { return flow_[cell(i, j)]; }

  void add(int i, int j, double x) {
    is_basic_[cell(i, j)] = 1;
    flow_[cell(i, j)] = x;
    adj_[static_cast<std::size_t>(i)].push_back(m_ + j);
    adj_[static_cast<std::size_t>(m_ + j)].push_back(i);
  }

  void remove(int i, int j) {
    is_basic_[cell(i, j)] = 0;
    flow_[cell(i, j)] = 0.0;
    erase(adj_[static_cast<std::size_t>(i)], m_ + j);
    erase(adj_[static_cast<std::size_t>(m_ + j)], i);
  }

  const std::vector<int>& neighbors(int node) const {
    return adj_[static_cast<std::size_t>(node)];
  }

 private:
  static void erase(std::vector<int>& v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it != v.end()) {
      *it = v.back();
      v.pop_back();
    }
  }

  int m_;
  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> is_basic_;
  std::vector<double> flow_;
};

}  // namespace

TransportPlan solve_transport(const Eigen::MatrixXd& cost,
                              std::span<const double> r,
                              std::span<const double> s) {
  const int m = static_cast<int>(cost.rows());
  const int n = static_cast<int>(cost.cols());
  if (m == 0 || n == 0) throw InvalidArgument("solve_transport: empty cost matrix");
  if (r.size() != static_cast<std::size_t>(m) ||
      s.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("solve_transport: marginal sizes do not match cost");
  }
  if (!cost.allFinite()) throw InvalidArgument("solve_transport: non-finite cost");
  check_marginal(r, "row marginal");
  check_marginal(s, "column marginal");

  Basis basis(m, n);

  // Matrix-minimum start: fill cells in order of increasing cost, then join
  // the resulting forest into a spanning tree with zero-flow cells.
  {
    const std::size_t count = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return cost(a / n, a % n) < cost(b / n, b % n);
    });
    std::vector<int> root(static_cast<std::size_t>(m + n));
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
      while (root[static_cast<std::size_t>(x)] != x) {
        root[static_cast<std::size_t>(x)] =
            root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
        x = root[static_cast<std::size_t>(x)];
      }
      return x;
    };
    std::vector<double> supply(r.begin(), r.end());
    std::vector<double> demand(s.begin(), s.end());
    int edges = 0;
    auto try_add = [&](std::uint32_t c, bool zero_flow) {
      const int i = static_cast<int>(c / n);
      const int j = static_cast<int>(c % n);
      double x = 0.0;
      if (!zero_flow) {
        x = std::min(supply[static_cast<std::size_t>(i)], demand[static_cast<std::size_t>(j)]);
        if (!(x > 0.0)) return;
      }
      const int a = find(i);
      const int b = find(m + j);
      if (a == b) return;
      root[static_cast<std::size_t>(a)] = b;
      basis.add(i, j, x);
      supply[static_cast<std::size_t>(i)] -= x;
      demand[static_cast<std::size_t>(j)] -= x;
      ++edges;
    };
    for (std::uint32_t c : order) {
      if (edges == m + n - 1) break;
      try_add(c, false);
    }
    for (std::uint32_t c : order) {
      if (edges == m + n - 1) break;
      try_add(c, true);
    }
  }

  // The basis tree is rooted at row 0. Potentials, parents and depths are
  // rebuilt only for the subtree that moves in a pivot.
  Eigen::VectorXd u(m);
  Eigen::VectorXd v(n);
  std::vector<int> parent(static_cast<std::size_t>(m + n), -1);
  std::vector<int> depth(static_cast<std::size_t>(m + n), 0);
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(m + n));

  auto hang = [&](int top, int above) {
    parent[static_cast<std::size_t>(top)] = above;
    depth[static_cast<std::size_t>(top)] =
        above < 0 ? 0 : depth[static_cast<std::size_t>(above)] + 1;
    if (above < 0) {
      u(top) = 0.0;
    } else if (top < m) {
      u(top) = cost(top, above - m) - v(above - m);
    } else {
      v(top - m) = cost(above, top - m) - u(above);
    }
    queue.clear();
    queue.push_back(top);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int node = queue[head];
      for (int next : basis.neighbors(node)) {
        if (next == parent[static_cast<std::size_t>(node)]) continue;
        parent[static_cast<std::size_t>(next)] = node;
        depth[static_cast<std::size_t>(next)] = depth[static_cast<std::size_t>(node)] + 1;
        if (node < m) {
          v(next - m) = cost(node, next - m) - u(node);
        } else {
          u(next) = cost(next, node - m) - v(node - m);
        }
        queue.push_back(next);
      }
    }
    return queue.size();
  };
  if (hang(0, -1) != static_cast<std::size_t>(m + n)) {
    throw NumericalError("solve_transport: basis is not a spanning tree");
  }

  // Tree path from column node of `j` to row node `i`, as node list.
  std::vector<int> up_i;
  auto tree_path = [&](int i, int j) {
    std::vector<int> path;
    up_i.clear();
    int a = m + j;
    int b = i;
    while (a != b) {
      if (depth[static_cast<std::size_t>(a)] >= depth[static_cast<std::size_t>(b)]) {
        path.push_back(a);
        a = parent[static_cast<std::size_t>(a)];
      } else {
        up_i.push_back(b);
        b = parent[static_cast<std::size_t>(b)];
      }
    }
    path.push_back(a);
    path.insert(path.end(), up_i.rbegin(), up_i.rend());
    return path;  // target (column j) ... i (row i)
  };

  const std::size_t cells = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  const std::size_t block =
      std::max<std::size_t>(16, static_cast<std::size_t>(std::sqrt(double(cells))));
  const long max_pivots = 50L * static_cast<long>(cells) + 1000L;
  std::size_t scan_start = 0;
  int degenerate_run = 0;
  int pivots = 0;

  while (true) {
    auto reduced = [&](std::size_t c) {
      const int i = static_cast<int>(c / static_cast<std::size_t>(n));
      const int j = static_cast<int>(c % static_cast<std::size_t>(n));
      return cost(i, j) - u(i) - v(j);
    };
    // Entering cell.
    std::size_t entering = cells;
    if (degenerate_run >= kDegenerateRunLimit) {
      for (std::size_t c = 0; c < cells; ++c) {
        const int i = static_cast<int>(c / static_cast<std::size_t>(n));
        const int j = static_cast<int>(c % static_cast<std::size_t>(n));
        if (!basis.basic(i, j) && reduced(c) < -kReducedCostTolerance) {
          entering = c;
          break;
        }
      }
    } else {
      double best = -kReducedCostTolerance;
      std::size_t scanned = 0;
      std::size_t c = scan_start;
      while (scanned < cells) {
        const std::size_t stop = std::min(cells, scanned + block);
        for (; scanned < stop; ++scanned) {
          const int i = static_cast<int>(c / static_cast<std::size_t>(n));
          const int j = static_cast<int>(c % static_cast<std::size_t>(n));
          if (!basis.basic(i, j)) {
            const double d = reduced(c);
            if (d < best) {
              best = d;
              entering = c;
            }
          }
          if (++c == cells) c = 0;
        }
        if (entering != cells) break;
      }
      scan_start = c;
    }
    if (entering == cells) break;
    if (++pivots > max_pivots) {
      throw NumericalError("solve_transport: pivot limit exceeded");
    }

    const int ei = static_cast<int>(entering / static_cast<std::size_t>(n));
    const int ej = static_cast<int>(entering % static_cast<std::size_t>(n));
    const std::vector<int> path = tree_path(ei, ej);
    // Cells along the path alternate -, +, -, ... starting at column ej.
    double theta = std::numeric_limits<double>::infinity();
    int leave_i = -1;
    int leave_j = -1;
    std::size_t leave_k = 0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      if (k % 2 != 0) continue;
      const int a = path[k];
      const int b = path[k + 1];
      const int ci = a < m ? a : b;
      const int cj = (a < m ? b : a) - m;
      const double x = basis.flow(ci, cj);
      if (x < theta ||
          (x == theta && basis.cell(ci, cj) < basis.cell(leave_i, leave_j))) {
        theta = x;
        leave_i = ci;
        leave_j = cj;
        leave_k = k;
      }
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const int a = path[k];
      const int b = path[k + 1];
      const int ci = a < m ? a : b;
      const int cj = (a < m ? b : a) - m;
      if (k % 2 == 0) {
        basis.flow(ci, cj) -= theta;
      } else {
        basis.flow(ci, cj) += theta;
      }
    }
    // The leaving edge cuts off the subtree holding whichever entering
    // endpoint shares its side of the cycle; that subtree is re-hung there.
    const int la = path[leave_k];
    const int lb = path[leave_k + 1];
    const bool below_a = parent[static_cast<std::size_t>(la)] == lb;
    const int top = below_a ? m + ej : ei;
    const int above = below_a ? ei : m + ej;
    basis.remove(leave_i, leave_j);
    basis.add(ei, ej, theta);
    hang(top, above);
    degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
  }

  TransportPlan out;
  out.plan = Eigen::MatrixXd::Zero(m, n);
  out.value = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (basis.basic(i, j)) {
        const double x = std::max(0.0, basis.flow(i, j));
        out.plan(i, j) = x;
        out.value += x * cost(i, j);
      }
    }
  }
  out.row_potential = u;
  out.col_potential = v;
  out.pivots = pivots;
  return out;
}

}  // namespace qdiffuse
