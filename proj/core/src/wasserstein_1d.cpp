#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wasslab/wasserstein.hpp"

namespace wasslab {
namespace {

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Wasserstein exponent p must be in [1, inf)");
  }
}

std::vector<std::size_t> sorted_order(const DiscreteMeasure& m) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m.points()(static_cast<Eigen::Index>(a), 0) <
           m.points()(static_cast<Eigen::Index>(b), 0);
  });
  return order;
}

std::vector<double> cumulative(const DiscreteMeasure& m, const std::vector<std::size_t>& order) {
  std::vector<double> cdf(order.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += m.weight(order[k]);
    cdf[k] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

Eigen::VectorXd Coupling::source_marginal(std::size_t n) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& t : transfers) out[static_cast<Eigen::Index>(t.source)] += t.mass;
  return out;
}

Eigen::VectorXd Coupling::target_marginal(std::size_t m) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (const auto& t : transfers) out[static_cast<Eigen::Index>(t.target)] += t.mass;
  return out;
}

Transport w1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  if (mu.dim() != 1 || nu.dim() != 1) {
    throw std::invalid_argument("w1d requires one-dimensional measures");
  }
  const auto order_mu = sorted_order(mu);
  const auto order_nu = sorted_order(nu);
  const auto cdf_mu = cumulative(mu, order_mu);
  const auto cdf_nu = cumulative(nu, order_nu);

  Transport out;
  std::size_t i = 0;
  std::size_t j = 0;
  double level = 0.0;
  while (i < cdf_mu.size() && j < cdf_nu.size()) {
    const bool source_first = cdf_mu[i] <= cdf_nu[j];
    const double next = source_first ? cdf_mu[i] : cdf_nu[j];
    const double mass = next - level;
    if (mass > 0.0) {
      const std::size_t s = order_mu[i];
      const std::size_t t = order_nu[j];
      const double gap = std::abs(mu.points()(static_cast<Eigen::Index>(s), 0) -
                                  nu.points()(static_cast<Eigen::Index>(t), 0));
      out.coupling.transfers.push_back({s, t, mass});
      out.coupling.cost += mass * std::pow(gap, p);
      level = next;
    }
    if (source_first) {
      ++i;
    } else {
      ++j;
    }
  }
  out.distance = std::pow(out.coupling.cost, 1.0 / p);
  return out;
}

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  if (mu.dim() != nu.dim()) throw std::invalid_argument("measures live in different dimensions");
  Eigen::MatrixXd c(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(nu.size()));
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const double d = (mu.points().row(i) - nu.points().row(j)).norm();
      c(i, j) = p == 1.0 ? d : (p == 2.0 ? d * d : std::pow(d, p));
    }
  }
  return c;
}

double cross_diameter(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("measures live in different dimensions");
  double diam = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      diam = std::max(diam, (mu.points().row(static_cast<Eigen::Index>(i)) -
                             nu.points().row(static_cast<Eigen::Index>(j)))
                                .norm());
    }
  }
  return diam;
}

}  // namespace wasslab
