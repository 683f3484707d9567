#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "wasslab/measure.hpp"

namespace wasslab {

/// One entry of a transport plan: `mass` moved from source atom to target
/// atom (indices into the input measures).
struct Transfer {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

/// A coupling of two discrete measures and its realized cost
/// sum mass * |x - y|^p.
struct Coupling {
  std::vector<Transfer> transfers;
  double cost = 0.0;

  Eigen::VectorXd source_marginal(std::size_t n) const;
  Eigen::VectorXd target_marginal(std::size_t m) const;
};

struct Transport {
  double distance = 0.0;  // cost^{1/p}
  Coupling coupling;
};

/// Exact W_p on the line by merging the two quantile functions. Ties in the
/// merge go to the source first, so the reported coupling is the canonical
/// monotone one. Throws std::invalid_argument unless both measures are 1-D.
Transport w1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

struct ExactOptions {
  std::size_t max_atoms = 512;        // cap on atoms(mu) + atoms(nu)
  bool use_assignment = true;         // Hungarian path for equal uniform weights
  std::size_t max_iterations = 5'000'000;
};

/// Exact discrete Monge-Kantorovich problem in any dimension via the
/// transportation simplex (or an assignment solver when both measures are
/// uniform with the same atom count). Throws CapacityError above the cap and
/// SolverError if the pivot budget is exhausted.
Transport w_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                  const ExactOptions& options = {});

/// Minimum-cost perfect matching on a square cost matrix. Returns the column
/// assigned to each row.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

/// Transportation simplex on supplies/demands with a dense cost matrix.
Coupling solve_transportation(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                              const Eigen::MatrixXd& cost,
                              std::size_t max_iterations = 5'000'000);

/// |x_i - y_j|^p for all pairs.
Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

struct SinkhornOptions {
  std::size_t max_iterations = 200'000;  // summed over the epsilon schedule
  double tolerance = 1e-9;               // max marginal violation at the final epsilon
};

struct SinkhornResult {
  double distance_estimate = 0.0;  // (<plan, cost>)^{1/p}
  double marginal_violation = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double epsilon = 0.0;  // final regularization actually used
};

/// Log-domain Sinkhorn with epsilon scaling: starts at diam^p and halves
/// down to `epsilon`. Non-convergence is reported through `converged`.
SinkhornResult w_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                          double epsilon, const SinkhornOptions& options = {});

/// Largest distance between a point of mu and a point of nu.
double cross_diameter(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace wasslab
