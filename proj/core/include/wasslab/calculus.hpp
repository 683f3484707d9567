#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wasslab/measure.hpp"

namespace wasslab {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Outer function g : R^n -> R of a cylindrical function, with its gradient
/// and declared sup-bounds on each partial derivative.
struct OuterFunction {
  std::string name;
  std::size_t arity = 1;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::vector<double> partial_bounds;  // sup |d_i g|, kUnbounded if none
};

/// Inner test function psi : R^d -> R with gradient and a declared bound on
/// sup |grad psi|.
struct InnerFunction {
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  double gradient_bound = kUnbounded;
};

class IntrinsicGradient;

/// f(mu) = g(mu(psi_1), ..., mu(psi_n)). Immutable and cheap to copy.
class CylindricalFunction {
 public:
  CylindricalFunction(std::string name, OuterFunction outer, std::vector<InnerFunction> inner);

  const std::string& name() const { return state_->name; }
  const OuterFunction& outer() const { return state_->outer; }
  const std::vector<InnerFunction>& inner() const { return state_->inner; }

  /// (mu(psi_1), ..., mu(psi_n)).
  std::vector<double> statistics(const DiscreteMeasure& mu) const;
  double operator()(const DiscreteMeasure& mu) const;

  /// Df(mu) evaluated at every atom of mu (N x d).
  Field derivative_at_atoms(const DiscreteMeasure& mu) const;

  /// sum_i sup|d_i g| * sup|grad psi_i|: certified bound on |Df(mu)(x)|.
  double uniform_gradient_bound() const;

  /// tau o f for a scalar outer map tau with derivative tau'.
  CylindricalFunction compose(std::string name, std::function<double(double)> tau,
                              std::function<double(double)> tau_prime,
                              double tau_prime_bound) const;

 private:
  struct State {
    std::string name;
    OuterFunction outer;
    std::vector<InnerFunction> inner;
  };
  std::shared_ptr<const State> state_;
};

/// x -> Df(mu)(x) = sum_i d_i g(mu(psi)) grad psi_i(x) for a fixed mu.
class IntrinsicGradient {
 public:
  IntrinsicGradient(CylindricalFunction f, std::vector<double> outer_partials, std::size_t dim);

  std::size_t dim() const { return dim_; }
  void operator()(std::span<const double> x, std::span<double> out) const;
  /// Convenience for d = 1.
  double operator()(double x) const;
  const std::vector<double>& outer_partials() const { return partials_; }

 private:
  CylindricalFunction f_;
  std::vector<double> partials_;
  std::size_t dim_;
};

double eval_cyl(const CylindricalFunction& f, const DiscreteMeasure& mu);

/// Closed-form intrinsic derivative at mu; no finite differences.
IntrinsicGradient intrinsic_derivative(const CylindricalFunction& f, const DiscreteMeasure& mu);

/// sum_i w_i <Df(mu)(x_i), phi(x_i)>.
double derivative_pairing(const CylindricalFunction& f, const DiscreteMeasure& mu,
                          const Field& phi);

/// mu o (id + eps phi)^{-1}: atom x_i moved to x_i + eps phi(x_i).
DiscreteMeasure displace(const DiscreteMeasure& mu, const Field& phi, double eps);

/// [f(mu o (id + h phi)^{-1}) - f(mu o (id - h phi)^{-1})] / (2h).
double directional_derivative_fd(const CylindricalFunction& f, const DiscreteMeasure& mu,
                                 const Field& phi, double h);

/// 1e-5 * (1 + scale).
double default_fd_step(double scale);

/// |FD of eps -> u(Psi(phi + eps xi)) at 0 - sum_i w_i <Du(Psi phi)(phi(x_i)), xi(x_i)>|.
double chain_rule_residual(const CylindricalFunction& u, const DiscreteMeasure& base,
                           const Field& phi, const Field& xi, double h);

/// The C_b^1 cut-off chi_l: identity on [-l, l], constant +-3l/2 beyond
/// +-2l, with slope given by a trapezoid between.
double chi(int l, double s);
double chi_derivative(int l, double s);

/// gamma_k(s) = (1 + [(s - k)^+]^2)^{p/2} - 1.
double gamma_k(double p, int k, double s);
double gamma_k_derivative(double p, int k, double s);

/// u_k(mu) = chi_1(mu(gamma_k(|.|))) as a cylindrical function.
CylindricalFunction reference_function_u(int k, double p);
double u_k_ref(int k, const DiscreteMeasure& mu, double p);

struct C1Report {
  double sup_dual_norm_estimate = 0.0;  // max over samples of |Df(mu)|_{L^{p*}(mu)}
  double uniform_bound = 0.0;           // from declared bounds
};

/// Bracket for the (C1) constant sup_mu |Df(mu)|_{T*_{mu,p}}. Throws on an
/// empty sample or p < 1.
C1Report c1_functional(const CylindricalFunction& f, std::span<const DiscreteMeasure> sample,
                       double p);

/// |Df(mu)|_{L^{p*}(mu)} with p* = p/(p-1); sup-norm over atoms when p = 1.
double dual_norm(const CylindricalFunction& f, const DiscreteMeasure& mu, double p);

namespace catalogue {

/// Outer primitives: id, square, tanh, sin, cos, atan, exp_neg_square,
/// chi1, smooth_clamp, sum, prod, constant.
OuterFunction outer(const std::string& name, std::size_t arity = 1);
/// Inner primitives (applied to the first coordinate unless noted):
/// x, x2 (|x|^2), x3, sin_pi, cos_pi, tanh, gauss (exp(-|x|^2)), atan.
InnerFunction inner(const std::string& name);

/// Named functions: mean, second_moment, tanh_mean, sin_second_moment,
/// constant, plus compositions written g(psi_1,...,psi_n), e.g.
/// "tanh(x2)" or "sum(x,cos_pi)". Throws std::invalid_argument for unknown
/// names.
CylindricalFunction function(const std::string& expr);

/// Names accepted by outer()/inner().
std::vector<std::string> outer_names();
std::vector<std::string> inner_names();

/// delta log((1 + e^{r/delta}) / (1 + e^{(r-1)/delta})): smooth surrogate
/// of min(max(r, 0), 1) with derivative in [0, 1].
double smooth_clamp(double r, double delta = 0.05);
double smooth_clamp_derivative(double r, double delta = 0.05);

}  // namespace catalogue

}  // namespace wasslab
