#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace wasslab {

/// alpha_n = a * n^s, n = 1, 2, ...
struct PowerLaw {
  double a = 1.0;
  double s = 2.0;
};

/// Finite list of eigenvalues in any order.
struct ExplicitList {
  std::vector<double> values;
};

using SpectrumFamily = std::variant<PowerLaw, ExplicitList>;

/// Truncated eigenvalue sequence 0 < alpha_1 <= ... <= alpha_M of the
/// covariance-inverse operator, plus a certified bound on the reciprocal
/// tail sum_{n>M} 1/alpha_n.
class Spectrum {
 public:
  const SpectrumFamily& family() const { return family_; }
  const std::vector<double>& alphas() const { return alphas_; }
  std::size_t size() const { return alphas_.size(); }
  // 0-based: alpha(0) is the smallest eigenvalue.
  double alpha(std::size_t index) const { return alphas_.at(index); }

  double tail_sum_bound() const { return tail_sum_bound_; }
  // Lower bound on every eigenvalue beyond the truncation; +inf if none.
  double next_alpha_lower() const { return next_alpha_lower_; }

  /// First `m` eigenvalues (m may be 0) with the tail metadata recomputed.
  Spectrum leading(std::size_t m) const;

 private:
  friend Spectrum make_spectrum(const SpectrumFamily&, std::size_t);
  static Spectrum build(const SpectrumFamily& family, std::size_t m);

  SpectrumFamily family_;
  std::vector<double> alphas_;
  double tail_sum_bound_ = 0.0;
  double next_alpha_lower_ = 0.0;
};

/// Throws std::invalid_argument for M == 0, s <= 1, a <= 0, non-positive
/// or non-finite list entries, or M larger than an explicit list.
Spectrum make_spectrum(const SpectrumFamily& family, std::size_t M);

/// One exact step of dX = -alpha X dt + sqrt(2) dW:
/// e^{-alpha t} x0 + sqrt((1 - e^{-2 alpha t}) / alpha) z.
double ou_transition(double alpha, double t, double x0, double z);

/// Conditional mean multiplier e^{-alpha t} and variance of one step.
struct TransitionMoments {
  double mean_factor;
  double variance;
};
TransitionMoments ou_transition_moments(double alpha, double t);

/// L^2(N(0, 1/alpha))-orthonormal eigenfunction of h'' - alpha x h' with
/// eigenvalue -k alpha: He_k(sqrt(alpha) x) / sqrt(k!), positive leading
/// coefficient.
double hermite_eigenfunction(int k, double alpha, double x);

/// d/dx of hermite_eigenfunction.
double hermite_eigenfunction_derivative(int k, double alpha, double x);

/// sum_{k>=0} e^{-2 k alpha t} = 1 / (1 - e^{-2 alpha t}).
double mode_trace_exact(double alpha, double t);

/// 1 + 2 e^{-2 alpha t} / min(2 alpha t, 1).
double mode_trace_bound(double alpha, double t);

struct HeatKernelBound {
  double log_head = 0.0;        // sum_{n<=M} log(mode_trace_bound)
  double log_tail_bound = 0.0;  // certified bound on sum_{n>M} log(...)
  double log_exact_head = 0.0;  // sum_{n<=M} log(mode_trace_exact)

  double log_bound() const { return log_head + log_tail_bound; }
};

/// Product prod_n mode_trace_bound(alpha_n, t) in log space.
///
/// The tail uses log(1+x) <= x and requires 2 alpha t >= 1 on every
/// untracked mode; throws std::invalid_argument when that regime does not
/// hold (increase M).
HeatKernelBound heat_kernel_sq_bound(const Spectrum& spectrum, double t);

/// Partial trace sum_{lambda <= cap} e^{-2 lambda t} over the eigenvalues
/// lambda = sum_n k_n alpha_n of the truncated product OU generator,
/// enumerated explicitly with multiplicity.
struct PartialTrace {
  double sum = 0.0;
  std::size_t terms = 0;
  bool truncated = false;  // hit max_terms before exhausting the cap
};
PartialTrace spectral_partial_trace(const Spectrum& spectrum, double t, double eigenvalue_cap,
                                    std::size_t max_terms = 5'000'000);

}  // namespace wasslab
