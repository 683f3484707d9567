#include <cmath>
#include <stdexcept>

#include "wasslab/calculus.hpp"

namespace wasslab {
namespace {

void require_index(int v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

double chi(int l, double s) {
  require_index(l, "chi index l");
  const double L = l;
  if (s <= -2.0 * L) return -1.5 * L;
  if (s <= -L) return -1.5 * L + (s + 2.0 * L) * (s + 2.0 * L) / (2.0 * L);
  if (s <= L) return s;
  if (s <= 2.0 * L) return 1.5 * L - (2.0 * L - s) * (2.0 * L - s) / (2.0 * L);
  return 1.5 * L;
}

double chi_derivative(int l, double s) {
  require_index(l, "chi index l");
  const double L = l;
  const double rise = std::min(std::max(s / L + 2.0, 0.0), 1.0);
  const double fall = std::min(std::max(2.0 - s / L, 0.0), 1.0);
  return std::min(rise, fall);
}

double gamma_k(double p, int k, double s) {
  require_index(k, "gamma index k");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be in [1, inf)");
  const double excess = std::max(s - k, 0.0);
  if (excess == 0.0) return 0.0;
  return std::pow(1.0 + excess * excess, p / 2.0) - 1.0;
}

double gamma_k_derivative(double p, int k, double s) {
  require_index(k, "gamma index k");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be in [1, inf)");
  const double excess = std::max(s - k, 0.0);
  if (excess == 0.0) return 0.0;
  return p * excess * std::pow(1.0 + excess * excess, p / 2.0 - 1.0);
}

CylindricalFunction reference_function_u(int k, double p) {
  require_index(k, "gamma index k");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be in [1, inf)");
  InnerFunction psi;
  psi.name = "gamma_" + std::to_string(k) + "(|x|)";
  psi.value = [p, k](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return gamma_k(p, k, std::sqrt(r2));
  };
  psi.gradient = [p, k](std::span<const double> x, std::span<double> out) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double r = std::sqrt(r2);
    const double slope = r > 0.0 ? gamma_k_derivative(p, k, r) / r : 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) out[c] = slope * x[c];
  };
  // p s (1 + s^2)^{p/2 - 1} is bounded by 1 only for p = 1.
  psi.gradient_bound = p == 1.0 ? 1.0 : kUnbounded;
  return CylindricalFunction("u_" + std::to_string(k), catalogue::outer("chi1"), {psi});
}

double u_k_ref(int k, const DiscreteMeasure& mu, double p) {
  return reference_function_u(k, p)(mu);
}

}  // namespace wasslab
