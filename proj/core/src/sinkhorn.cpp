#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wasslab/wasserstein.hpp"

namespace wasslab {
namespace {

// Scalings beyond this are folded back into the log potentials.
constexpr double kAbsorb = 1e30;
constexpr double kOmega = 1.5;

}  // namespace

// Stabilized scaling (potentials f, g in log form, bounded multiplicative
// scalings u, v on top): plan_ij = u_i exp((f_i + g_j - C_ij)/eps) a_i b_j v_j.
SinkhornResult w_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                          double epsilon, const SinkhornOptions& options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("Sinkhorn regularization must be positive");
  const Eigen::MatrixXd cost = cost_matrix(mu, nu, p);
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const Eigen::VectorXd& a = mu.weights();
  const Eigen::VectorXd& b = nu.weights();

  SinkhornResult out;
  const double scale = cost.maxCoeff();
  if (scale == 0.0) {
    out.converged = true;
    out.epsilon = epsilon;
    return out;
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
  Eigen::MatrixXd K(n, m);
  Eigen::VectorXd Kv(n), Ktu(m);

  const auto rebuild = [&](double eps) {
    f.array() += eps * u.array().log();
    g.array() += eps * v.array().log();
    u.setOnes();
    v.setOnes();
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        K(i, j) = std::exp((f[i] + g[j] - cost(i, j)) / eps) * a[i] * b[j];
      }
    }
  };
  const auto row_violation = [&]() {
    Kv.noalias() = K * v;
    return (u.cwiseProduct(Kv) - a).cwiseAbs().maxCoeff();
  };

  double eps = std::max(scale, epsilon);
  rebuild(eps);
  while (true) {
    const bool final_stage = eps <= epsilon;
    const double stage_tol = final_stage ? options.tolerance : std::max(options.tolerance, 1e-6);
    bool stage_done = false;
    while (out.iterations < options.max_iterations) {
      ++out.iterations;
      Kv.noalias() = K * v;
      u = u.array().pow(1.0 - kOmega) * a.cwiseQuotient(Kv).array().pow(kOmega);
      Ktu.noalias() = K.transpose() * u;
      v = v.array().pow(1.0 - kOmega) * b.cwiseQuotient(Ktu).array().pow(kOmega);
      if (!u.allFinite() || !v.allFinite() || u.maxCoeff() > kAbsorb || v.maxCoeff() > kAbsorb ||
          u.minCoeff() < 1.0 / kAbsorb || v.minCoeff() < 1.0 / kAbsorb) {
        if (!u.allFinite() || !v.allFinite()) {
          u.setOnes();
          v.setOnes();
        }
        rebuild(eps);
        continue;
      }
      if (out.iterations % 10 == 0) {
        out.marginal_violation = row_violation();
        if (out.marginal_violation <= stage_tol) {
          stage_done = true;
          break;
        }
      }
    }
    out.epsilon = eps;
    if (!stage_done) {
      out.marginal_violation = row_violation();
      break;
    }
    if (final_stage) {
      out.converged = true;
      break;
    }
    eps = std::max(eps / 2.0, epsilon);
    rebuild(eps);
  }

  rebuild(out.epsilon);
  const double transport_cost = K.cwiseProduct(cost).sum();
  out.distance_estimate = std::pow(transport_cost, 1.0 / p);
  return out;
}

}  // namespace wasslab
