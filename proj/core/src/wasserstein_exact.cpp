#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wasslab/error.hpp"
#include "wasslab/wasserstein.hpp"

namespace wasslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Spanning-tree basis of the transportation problem. Nodes 0..n-1 are
// sources, n..n+m-1 are targets; every basic cell is a tree edge.
class TransportBasis {
 public:
  struct Cell {
    std::size_t row;
    std::size_t col;
    double flow;
  };

  TransportBasis(std::size_t n, std::size_t m) : n_(n), adjacency_(n + m) {}

  std::size_t add(std::size_t row, std::size_t col, double flow) {
    const std::size_t id = cells_.size();
    cells_.push_back({row, col, flow});
    adjacency_[row].push_back(id);
    adjacency_[n_ + col].push_back(id);
    return id;
  }

  void replace(std::size_t id, std::size_t row, std::size_t col, double flow) {
    unlink(cells_[id].row, id);
    unlink(n_ + cells_[id].col, id);
    cells_[id] = {row, col, flow};
    adjacency_[row].push_back(id);
    adjacency_[n_ + col].push_back(id);
  }

  const std::vector<Cell>& cells() const { return cells_; }
  std::vector<Cell>& cells() { return cells_; }

  std::size_t other_end(std::size_t id, std::size_t node) const {
    const auto& c = cells_[id];
    return node < n_ ? n_ + c.col : c.row;
  }

  // u_i + v_j = c_ij on every basic cell, u_0 = 0.
  void potentials(const Eigen::MatrixXd& cost, std::vector<double>& u,
                  std::vector<double>& v) const {
    const std::size_t total = adjacency_.size();
    std::vector<double> pot(total, kInf);
    std::vector<std::size_t> stack{0};
    pot[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t id : adjacency_[node]) {
        const std::size_t next = other_end(id, node);
        if (pot[next] != kInf) continue;
        const double c = cost(static_cast<Eigen::Index>(cells_[id].row),
                              static_cast<Eigen::Index>(cells_[id].col));
        pot[next] = c - pot[node];
        stack.push_back(next);
      }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(n_));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(n_), pot.end());
  }

  // Tree path from `from` to `to` as a list of cell ids, in order.
  std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
    const std::size_t total = adjacency_.size();
    std::vector<std::size_t> via(total, std::numeric_limits<std::size_t>::max());
    std::vector<bool> seen(total, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty() && !seen[to]) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t id : adjacency_[node]) {
        const std::size_t next = other_end(id, node);
        if (seen[next]) continue;
        seen[next] = true;
        via[next] = id;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> edges;
    for (std::size_t node = to; node != from;) {
      const std::size_t id = via[node];
      edges.push_back(id);
      node = other_end(id, node);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

 private:
  void unlink(std::size_t node, std::size_t id) {
    auto& list = adjacency_[node];
    list.erase(std::find(list.begin(), list.end(), id));
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Cell> cells_;
};

bool uniform_weights(const DiscreteMeasure& m) {
  const double w = 1.0 / static_cast<double>(m.size());
  return (m.weights().array() - w).abs().maxCoeff() <= 1e-15;
}

}  // namespace

Coupling solve_transportation(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                              const Eigen::MatrixXd& cost, std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(supply.size());
  const auto m = static_cast<std::size_t>(demand.size());
  if (n == 0 || m == 0) throw std::invalid_argument("transportation problem needs atoms");
  if (static_cast<std::size_t>(cost.rows()) != n || static_cast<std::size_t>(cost.cols()) != m) {
    throw std::invalid_argument("cost matrix shape does not match supplies and demands");
  }

  // North-west corner start: exactly n + m - 1 cells forming a spanning tree.
  TransportBasis basis(n, m);
  {
    std::vector<double> a(supply.data(), supply.data() + n);
    std::vector<double> b(demand.data(), demand.data() + m);
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      if (i == n - 1 && j == m - 1) {
        // Whatever rounding dust remains lands here.
        basis.add(i, j, std::max(0.0, std::min(a[i], b[j])));
        break;
      }
      const double x = std::min(a[i], b[j]);
      basis.add(i, j, std::max(0.0, x));
      a[i] -= x;
      b[j] -= x;
      if ((a[i] <= b[j] && i < n - 1) || j == m - 1) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  std::vector<double> u;
  std::vector<double> v;
  std::size_t degenerate_streak = 0;

  for (std::size_t iter = 0;; ++iter) {
    if (iter >= max_iterations) {
      throw SolverError("transportation simplex exceeded " + std::to_string(max_iterations) +
                        " pivots");
    }
    basis.potentials(cost, u, v);

    // Dantzig pricing; Bland's rule while stuck on degenerate pivots.
    const bool bland = degenerate_streak > n + m;
    double best = -tol;
    std::size_t enter_row = n;
    std::size_t enter_col = m;
    for (std::size_t i = 0; i < n && !(bland && enter_row < n); ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double reduced =
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - u[i] - v[j];
        if (reduced < best) {
          best = reduced;
          enter_row = i;
          enter_col = j;
          if (bland) break;
        }
      }
    }
    if (enter_row == n) break;

    // Cycle: entering cell (+), then the tree path target -> source with
    // alternating signs starting with (-).
    const auto cycle = basis.path(n + enter_col, enter_row);
    double theta = kInf;
    std::size_t leaving = cycle.size();
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      const double flow = basis.cells()[cycle[k]].flow;
      if (flow < theta || (bland && flow == theta && cycle[k] < cycle[leaving])) {
        theta = flow;
        leaving = k;
      }
    }
    theta = std::max(0.0, theta);
    degenerate_streak = theta == 0.0 ? degenerate_streak + 1 : 0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      auto& flow = basis.cells()[cycle[k]].flow;
      flow += (k % 2 == 0) ? -theta : theta;
      if (flow < 0.0) flow = 0.0;
    }
    basis.replace(cycle[leaving], enter_row, enter_col, theta);
  }

  Coupling out;
  for (const auto& c : basis.cells()) {
    if (c.flow <= 0.0) continue;
    out.transfers.push_back({c.row, c.col, c.flow});
    out.cost += c.flow * cost(static_cast<Eigen::Index>(c.row), static_cast<Eigen::Index>(c.col));
  }
  return out;
}

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  // Shortest augmenting paths with row/column potentials (Jonker-Volgenant
  // style Hungarian method), O(n^3).
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows()) throw std::invalid_argument("assignment needs a square matrix");
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // column -> row, 1-based, 0 = free
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t i0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

Transport w_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                  const ExactOptions& options) {
  if (mu.size() + nu.size() > options.max_atoms) {
    throw CapacityError("exact OT is capped at " + std::to_string(options.max_atoms) +
                        " atoms in total (got " + std::to_string(mu.size() + nu.size()) +
                        "); use the sinkhorn solver for larger instances");
  }
  const Eigen::MatrixXd cost = cost_matrix(mu, nu, p);
  Transport out;
  if (options.use_assignment && mu.size() == nu.size() && uniform_weights(mu) &&
      uniform_weights(nu)) {
    const auto assignment = solve_assignment(cost);
    const double w = 1.0 / static_cast<double>(mu.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      out.coupling.transfers.push_back({i, assignment[i], w});
      out.coupling.cost +=
          w * cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(assignment[i]));
    }
  } else {
    out.coupling = solve_transportation(mu.weights(), nu.weights(), cost, options.max_iterations);
  }
  out.distance = std::pow(std::max(0.0, out.coupling.cost), 1.0 / p);
  return out;
}

}  // namespace wasslab
