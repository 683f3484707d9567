#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wasslab/calculus.hpp"

namespace wasslab {

CylindricalFunction::CylindricalFunction(std::string name, OuterFunction outer,
                                         std::vector<InnerFunction> inner) {
  if (outer.arity != inner.size()) {
    throw std::invalid_argument("outer function '" + outer.name + "' takes " +
                                std::to_string(outer.arity) + " statistics, got " +
                                std::to_string(inner.size()));
  }
  if (outer.partial_bounds.size() != outer.arity) {
    outer.partial_bounds.assign(outer.arity, kUnbounded);
  }
  state_ = std::make_shared<const State>(State{std::move(name), std::move(outer), std::move(inner)});
}

std::vector<double> CylindricalFunction::statistics(const DiscreteMeasure& mu) const {
  std::vector<double> stats(inner().size(), 0.0);
  for (std::size_t k = 0; k < inner().size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += mu.weight(i) * inner()[k].value(mu.point(i));
    stats[k] = acc;
  }
  return stats;
}

double CylindricalFunction::operator()(const DiscreteMeasure& mu) const {
  const auto stats = statistics(mu);
  return outer().value(stats);
}

Field CylindricalFunction::derivative_at_atoms(const DiscreteMeasure& mu) const {
  const auto grad = intrinsic_derivative(*this, mu);
  Field out(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(mu.dim()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    grad(mu.point(i), {out.data() + i * mu.dim(), mu.dim()});
  }
  return out;
}

double CylindricalFunction::uniform_gradient_bound() const {
  double bound = 0.0;
  for (std::size_t k = 0; k < inner().size(); ++k) {
    const double a = outer().partial_bounds[k];
    const double b = inner()[k].gradient_bound;
    if (a == 0.0 || b == 0.0) continue;
    bound += a * b;
  }
  return bound;
}

CylindricalFunction CylindricalFunction::compose(std::string name,
                                                 std::function<double(double)> tau,
                                                 std::function<double(double)> tau_prime,
                                                 double tau_prime_bound) const {
  OuterFunction g = outer();
  OuterFunction composed;
  composed.name = name;
  composed.arity = g.arity;
  composed.value = [g, tau](std::span<const double> r) { return tau(g.value(r)); };
  composed.gradient = [g, tau_prime](std::span<const double> r, std::span<double> out) {
    g.gradient(r, out);
    const double scale = tau_prime(g.value(r));
    for (double& v : out) v *= scale;
  };
  composed.partial_bounds = g.partial_bounds;
  for (double& b : composed.partial_bounds) b = b == 0.0 ? 0.0 : b * tau_prime_bound;
  return CylindricalFunction(std::move(name), std::move(composed), inner());
}

IntrinsicGradient::IntrinsicGradient(CylindricalFunction f, std::vector<double> outer_partials,
                                     std::size_t dim)
    : f_(std::move(f)), partials_(std::move(outer_partials)), dim_(dim) {}

void IntrinsicGradient::operator()(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> buf(dim_);
  for (std::size_t k = 0; k < partials_.size(); ++k) {
    if (partials_[k] == 0.0) continue;
    f_.inner()[k].gradient(x, buf);
    for (std::size_t c = 0; c < dim_; ++c) out[c] += partials_[k] * buf[c];
  }
}

double IntrinsicGradient::operator()(double x) const {
  if (dim_ != 1) throw std::invalid_argument("scalar evaluation needs d = 1");
  double out = 0.0;
  (*this)(std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

double eval_cyl(const CylindricalFunction& f, const DiscreteMeasure& mu) { return f(mu); }

IntrinsicGradient intrinsic_derivative(const CylindricalFunction& f, const DiscreteMeasure& mu) {
  const auto stats = f.statistics(mu);
  std::vector<double> partials(stats.size(), 0.0);
  if (!stats.empty()) f.outer().gradient(stats, partials);
  return IntrinsicGradient(f, std::move(partials), mu.dim());
}

double derivative_pairing(const CylindricalFunction& f, const DiscreteMeasure& mu,
                          const Field& phi) {
  if (static_cast<std::size_t>(phi.rows()) != mu.size() ||
      static_cast<std::size_t>(phi.cols()) != mu.dim()) {
    throw std::invalid_argument("direction field must be N x d on the support of mu");
  }
  const Field grad = f.derivative_at_atoms(mu);
  return (grad.cwiseProduct(phi).rowwise().sum().array() * mu.weights().array()).sum();
}

DiscreteMeasure displace(const DiscreteMeasure& mu, const Field& phi, double eps) {
  if (static_cast<std::size_t>(phi.rows()) != mu.size() ||
      static_cast<std::size_t>(phi.cols()) != mu.dim()) {
    throw std::invalid_argument("displacement field must be N x d on the support of mu");
  }
  return DiscreteMeasure(mu.points() + eps * phi, mu.weights());
}

double directional_derivative_fd(const CylindricalFunction& f, const DiscreteMeasure& mu,
                                 const Field& phi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  return (f(displace(mu, phi, h)) - f(displace(mu, phi, -h))) / (2.0 * h);
}

double default_fd_step(double scale) { return 1e-5 * (1.0 + std::abs(scale)); }

double chain_rule_residual(const CylindricalFunction& u, const DiscreteMeasure& base,
                           const Field& phi, const Field& xi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (phi.rows() != xi.rows() || phi.cols() != xi.cols()) {
    throw std::invalid_argument("phi and xi must have the same shape");
  }
  const double fd = (u(pushforward(base, phi + h * xi)) - u(pushforward(base, phi - h * xi))) /
                    (2.0 * h);
  // Psi(phi) carries atom phi(x_i) in row i, so Du(Psi phi) at its atoms is
  // Du(Psi phi) o phi.
  const double lifted = derivative_pairing(u, pushforward(base, phi), xi);
  return std::abs(fd - lifted);
}

double dual_norm(const CylindricalFunction& f, const DiscreteMeasure& mu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be in [1, inf)");
  const Field grad = f.derivative_at_atoms(mu);
  const Eigen::VectorXd norms = grad.rowwise().norm();
  if (p == 1.0) return norms.maxCoeff();
  const double q = p / (p - 1.0);
  return std::pow((norms.array().pow(q) * mu.weights().array()).sum(), 1.0 / q);
}

C1Report c1_functional(const CylindricalFunction& f, std::span<const DiscreteMeasure> sample,
                       double p) {
  if (sample.empty()) throw std::invalid_argument("(C1) functional needs at least one measure");
  C1Report out;
  out.uniform_bound = f.uniform_gradient_bound();
  for (const auto& mu : sample) {
    out.sup_dual_norm_estimate = std::max(out.sup_dual_norm_estimate, dual_norm(f, mu, p));
  }
  return out;
}

}  // namespace wasslab
