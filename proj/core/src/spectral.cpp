#include "wasslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wasslab/stats.hpp"

namespace wasslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rate(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("rate alpha must be positive and finite, got " +
                                std::to_string(alpha));
  }
}

}  // namespace

Spectrum Spectrum::build(const SpectrumFamily& family, std::size_t m) {
  Spectrum out;
  out.family_ = family;
  if (const auto* power = std::get_if<PowerLaw>(&family)) {
    if (!(power->a > 0.0) || !std::isfinite(power->a)) {
      throw std::invalid_argument("power-law base a must be positive");
    }
    if (!(power->s > 1.0) || !std::isfinite(power->s)) {
      throw std::invalid_argument("power-law exponent s must exceed 1 for a summable spectrum");
    }
    out.alphas_.resize(m);
    for (std::size_t n = 1; n <= m; ++n) {
      out.alphas_[n - 1] = power->a * std::pow(static_cast<double>(n), power->s);
    }
    const double a = power->a;
    const double s = power->s;
    // sum_{n>m} n^{-s} <= int_m^inf t^{-s} dt; for m = 0 split off n = 1.
    if (m == 0) {
      out.tail_sum_bound_ = (1.0 + 1.0 / (s - 1.0)) / a;
    } else {
      out.tail_sum_bound_ = std::pow(static_cast<double>(m), 1.0 - s) / (a * (s - 1.0));
    }
    out.next_alpha_lower_ = a * std::pow(static_cast<double>(m + 1), s);
    return out;
  }

  auto values = std::get<ExplicitList>(family).values;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("explicit eigenvalues must be positive and finite");
    }
  }
  if (m > values.size()) {
    throw std::invalid_argument("truncation M exceeds the explicit eigenvalue list");
  }
  std::sort(values.begin(), values.end());
  out.alphas_.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  CompensatedSum tail;
  for (std::size_t n = m; n < values.size(); ++n) tail.add(1.0 / values[n]);
  out.tail_sum_bound_ = tail.value();
  out.next_alpha_lower_ = m < values.size() ? values[m] : kInf;
  return out;
}

Spectrum Spectrum::leading(std::size_t m) const {
  if (m > alphas_.size()) {
    throw std::invalid_argument("leading(m) requires m <= size()");
  }
  return build(family_, m);
}

Spectrum make_spectrum(const SpectrumFamily& family, std::size_t M) {
  if (M == 0) throw std::invalid_argument("spectrum truncation M must be at least 1");
  return Spectrum::build(family, M);
}

TransitionMoments ou_transition_moments(double alpha, double t) {
  require_rate(alpha);
  if (!(t >= 0.0)) throw std::invalid_argument("transition time must be non-negative");
  return {std::exp(-alpha * t), -std::expm1(-2.0 * alpha * t) / alpha};
}

double ou_transition(double alpha, double t, double x0, double z) {
  const auto m = ou_transition_moments(alpha, t);
  if (t == 0.0) return x0;
  return m.mean_factor * x0 + std::sqrt(m.variance) * z;
}

double hermite_eigenfunction(int k, double alpha, double x) {
  if (k < 0) throw std::invalid_argument("Hermite degree must be non-negative");
  require_rate(alpha);
  const double y = std::sqrt(alpha) * x;
  // Normalized three-term recurrence:
  // h_{j+1} = (y h_j - sqrt(j) h_{j-1}) / sqrt(j+1).
  double prev = 0.0;
  double cur = 1.0;
  for (int j = 0; j < k; ++j) {
    const double next = (y * cur - std::sqrt(static_cast<double>(j)) * prev) /
                        std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_eigenfunction_derivative(int k, double alpha, double x) {
  if (k < 0) throw std::invalid_argument("Hermite degree must be non-negative");
  if (k == 0) {
    require_rate(alpha);
    return 0.0;
  }
  return std::sqrt(alpha * static_cast<double>(k)) * hermite_eigenfunction(k - 1, alpha, x);
}

double mode_trace_exact(double alpha, double t) {
  require_rate(alpha);
  if (!(t > 0.0)) throw std::invalid_argument("heat-kernel trace requires t > 0");
  return -1.0 / std::expm1(-2.0 * alpha * t);
}

double mode_trace_bound(double alpha, double t) {
  require_rate(alpha);
  if (!(t > 0.0)) throw std::invalid_argument("heat-kernel bound requires t > 0");
  const double x = 2.0 * alpha * t;
  return 1.0 + 2.0 * std::exp(-x) / std::min(x, 1.0);
}

HeatKernelBound heat_kernel_sq_bound(const Spectrum& spectrum, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat-kernel bound requires t > 0");
  CompensatedSum head;
  CompensatedSum exact;
  for (double alpha : spectrum.alphas()) {
    const double x = 2.0 * alpha * t;
    head.add(std::log1p(2.0 * std::exp(-x) / std::min(x, 1.0)));
    exact.add(-std::log(-std::expm1(-x)));
  }
  HeatKernelBound out;
  out.log_head = head.value();
  out.log_exact_head = exact.value();

  const double next = spectrum.next_alpha_lower();
  if (std::isinf(next) || spectrum.tail_sum_bound() == 0.0) return out;
  if (2.0 * next * t < 1.0) {
    throw std::invalid_argument(
        "tail modes have 2*alpha*t < 1; raise M so that 2*alpha_{M+1}*t >= 1");
  }
  // For n > M the term is log(1 + 2 e^{-2 a t}) <= 2 e^{-a t} e^{-a t}, and
  // e^{-y} <= 1/(e y) gives 2 e^{-next t} / (e t a).
  out.log_tail_bound =
      2.0 * std::exp(-next * t) * spectrum.tail_sum_bound() / (std::numbers::e * t);
  return out;
}

PartialTrace spectral_partial_trace(const Spectrum& spectrum, double t, double eigenvalue_cap,
                                    std::size_t max_terms) {
  if (!(t > 0.0)) throw std::invalid_argument("partial trace requires t > 0");
  if (!(eigenvalue_cap >= 0.0)) throw std::invalid_argument("eigenvalue cap must be >= 0");
  const auto& alphas = spectrum.alphas();
  PartialTrace out;
  CompensatedSum sum;

  // Depth-first over occupation numbers k_n, modes in increasing order.
  auto visit = [&](auto&& self, std::size_t mode, double used) -> void {
    if (out.truncated) return;
    if (mode == alphas.size() || alphas[mode] > eigenvalue_cap - used) {
      // Remaining modes can only take k = 0 (alphas are sorted).
      if (out.terms >= max_terms) {
        out.truncated = true;
        return;
      }
      sum.add(std::exp(-2.0 * used * t));
      ++out.terms;
      return;
    }
    for (double lambda = used; lambda <= eigenvalue_cap; lambda += alphas[mode]) {
      self(self, mode + 1, lambda);
      if (out.truncated) return;
    }
  };
  visit(visit, 0, 0.0);
  out.sum = sum.value();
  return out;
}

}  // namespace wasslab
