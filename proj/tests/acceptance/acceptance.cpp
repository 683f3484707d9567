// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wasslab/calculus.hpp"
#include "wasslab/dirichlet.hpp"
#include "wasslab/ou_sim.hpp"
#include "wasslab/spectral.hpp"
#include "wasslab/tangent.hpp"
#include "wasslab/wasserstein.hpp"

using namespace wasslab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Field random_field(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Field f(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < f.rows(); ++i) f(i, 0) = N(g);
  return f;
}

// Model shared by the Monte Carlo criteria: alpha_n = n^2, M = 8, N = 64.
struct Model {
  Spectrum spectrum = make_spectrum(PowerLaw{1.0, 2.0}, 8);
  BaseMeasure base = make_base_measure(BaseKind::uniform01, 64);
  EigenBasis basis = eigenbasis_cosine(base, 8);
};

const std::vector<std::string> kFunctions = {"tanh_mean", "sin_second_moment", "atan(cos_pi)"};

Outcome ac1() {
  Outcome o;
  std::size_t violations = 0;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double alpha = std::pow(10.0, -3.0 + 6.0 * i / 39.0);
      const double t = std::pow(10.0, -3.0 + 5.0 * j / 39.0);
      if (!(mode_trace_exact(alpha, t) <= mode_trace_bound(alpha, t))) ++violations;
    }
  }
  const double exact = mode_trace_exact(1.0, 0.5);
  const double bound = mode_trace_bound(1.0, 0.5);
  o.pass = violations == 0 && std::abs(exact - 1.581977) <= 1e-6 && std::abs(bound - 1.735759) <= 1e-6;
  o.detail = fmt("violations=%g exact(1,0.5)=%.7f bound(1,0.5)=%.7f", static_cast<double>(violations),
                 exact, bound);
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto spectrum = make_spectrum(PowerLaw{1.0, 2.0}, 50);
  double worst = 0.0;
  double shadow_margin = -1e300;
  for (double t : {0.1, 1.0, 10.0}) {
    const auto hk = heat_kernel_sq_bound(spectrum, t);
    long double oracle = 0.0L;
    for (int n = 1; n <= 50; ++n) {
      const long double x = 2.0L * n * n * t;
      oracle += std::log1p(2.0L * std::exp(-x) / std::min(x, 1.0L));
    }
    worst = std::max(worst, std::abs(hk.log_head - static_cast<double>(oracle)));
    const auto shadow = spectral_partial_trace(spectrum, t, 40.0);
    shadow_margin = std::max(shadow_margin, std::log(shadow.sum) - hk.log_bound());
    o.pass = o.pass && !shadow.truncated && hk.log_exact_head <= hk.log_bound();
  }
  o.pass = o.pass && worst <= 1e-12 && shadow_margin <= 0.0;
  o.detail = fmt("max|log-product - termwise|=%.2e max(log shadow - log bound)=%.3g", worst, shadow_margin);
  return o;
}

Outcome ac3() {
  Outcome o;
  std::mt19937_64 g(3);
  const auto base = make_base_measure(BaseKind::uniform01, 200).measure;
  double excess = -1e300;
  double gap = 0.0;
  for (double p : {1.0, 2.0}) {
    for (int k = 0; k < 500; ++k) {
      const Field a = random_field(g, 200), b = random_field(g, 200);
      const double w = w1d(pushforward(base, a), pushforward(base, b), p).distance;
      excess = std::max(excess, w - tangent_norm(base, a - b, p));
    }
    for (int k = 0; k < 100; ++k) {
      Field a = random_field(g, 200), b = random_field(g, 200);
      std::sort(a.data(), a.data() + a.size());
      std::sort(b.data(), b.data() + b.size());
      const double w = w1d(pushforward(base, a), pushforward(base, b), p).distance;
      gap = std::max(gap, std::abs(w - tangent_norm(base, a - b, p)));
    }
  }
  o.pass = excess <= 1e-12 && gap <= 1e-10;
  o.detail = fmt("max(W - norm)=%.3g over 1000 pairs, monotone max|W - norm|=%.2e", excess, gap);
  return o;
}

Outcome ac4() {
  Outcome o;
  std::mt19937_64 g(4);
  const std::vector<std::string> fs = {"tanh_mean", "sin_second_moment", "atan(cos_pi)",
                                       "tanh(x2)",  "sum(x,cos_pi)",     "prod(tanh,gauss)"};
  const auto base = make_base_measure(BaseKind::uniform01, 50).measure;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto u = catalogue::function(fs[static_cast<std::size_t>(k) % fs.size()]);
    const Field phi = base.points() + random_field(g, 50, 0.3);
    const Field xi = random_field(g, 50);
    const double pairing = derivative_pairing(u, pushforward(base, phi), xi);
    const double h = default_fd_step(phi.cwiseAbs().maxCoeff());
    worst = std::max(worst, chain_rule_residual(u, base, phi, xi, h) / std::max(1.0, std::abs(pairing)));
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("max relative residual=%.2e over 100 triples", worst);
  return o;
}

Outcome ac5() {
  Outcome o;
  std::mt19937_64 g(5);
  const std::vector<std::string> fs = {"mean",      "second_moment", "tanh_mean",  "sin_second_moment",
                                       "atan(x3)", "exp_neg_square(sin_pi)", "prod(tanh,gauss)"};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto f = catalogue::function(fs[static_cast<std::size_t>(k) % fs.size()]);
    const auto mu = oracle::random_measure_1d(g, 5 + static_cast<std::size_t>(k) % 30);
    const Field phi = random_field(g, mu.size());
    const double analytic = derivative_pairing(f, mu, phi);
    const double fd = directional_derivative_fd(f, mu, phi, default_fd_step(mu.points().cwiseAbs().maxCoeff()));
    worst = std::max(worst, std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("max relative |FD - analytic|=%.2e over 100 triples", worst);
  return o;
}

Outcome ac6() {
  Outcome o;
  const Model m;
  double worst_z = 0.0;
  std::uint64_t seed = 600;
  for (const auto& un : kFunctions) {
    for (const auto& vn : kFunctions) {
      for (std::size_t mode : {0u, 1u, 2u}) {
        const auto r = ibp_check(catalogue::function(un), catalogue::function(vn), mode, m.spectrum,
                                 m.basis, 100'000, ++seed);
        const double z = std::abs(r.difference.value) / r.difference.std_error;
        worst_z = std::max(worst_z, z);
        o.pass = o.pass && std::abs(r.difference.value) <= 4.0 * r.difference.std_error;
      }
    }
  }
  double worst_linear = 0.0;
  for (std::size_t mode : {0u, 1u, 2u}) {
    const auto r = ibp_check(TangentFunction::coefficient(mode), TangentFunction::constant(1.0), mode,
                             m.spectrum, m.basis, 100'000, ++seed);
    const double z = std::abs(r.rhs.value - 1.0) / r.rhs.std_error;
    worst_linear = std::max(worst_linear, z);
    o.pass = o.pass && r.lhs.value == 1.0 && z <= 4.0;
  }
  o.detail = fmt("27 pairs: max |lhs-rhs|/SE=%.2f; linear case max |rhs-1|/SE=%.2f (lhs exactly 1)",
                 worst_z, worst_linear);
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto spectrum = make_spectrum(PowerLaw{1.0, 2.0}, 2);
  double worst_z = 0.0;
  std::uint64_t seed = 700;
  for (int k = 0; k <= 4; ++k) {
    for (std::size_t mode : {0u, 1u}) {
      for (double t : {0.1, 0.5, 2.0}) {
        const double x0 = 0.8;
        const auto c = semigroup_eigen_check(k, spectrum, mode, t, x0, 100'000, ++seed);
        const double target = std::exp(-k * spectrum.alpha(mode) * t) *
                              oracle::normalized_hermite(k, spectrum.alpha(mode), x0);
        const double diff = std::abs(c.lhs.value - target);
        if (c.lhs.std_error > 0) worst_z = std::max(worst_z, diff / c.lhs.std_error);
        o.pass = o.pass && diff <= 4.0 * c.lhs.std_error + 1e-14;
      }
    }
  }
  o.detail = fmt("30 cases: max |mean - e^{-k a t} H_k(x0)|/SE=%.2f", worst_z);
  return o;
}

Outcome ac8() {
  Outcome o;
  const Model m;
  std::vector<TangentFunction> big;
  for (const char* name : {"mean", "tanh_mean", "second_moment", "sin_second_moment", "atan(cos_pi)", "tanh(x2)"}) {
    big.push_back(TangentFunction::pullback(catalogue::function(name)));
  }
  big.push_back(TangentFunction::constant(1.0));
  big.push_back(TangentFunction::hermite(0, 2, m.spectrum.alpha(0)));
  big.push_back(TangentFunction::coefficient(1));
  const std::vector<std::size_t> sub = {0, 1, 2, 3, 4, 5};
  const auto g = galerkin_eig_compare(big, sub, m.spectrum, m.basis, 100'000, 800);
  double worst = -1e300;
  for (std::size_t n = 0; n < sub.size(); ++n) {
    worst = std::max(worst, (g.sigma[n] - g.lambda[n]) / g.std_error[n]);
    o.pass = o.pass && g.lambda[n] >= g.sigma[n] - 4.0 * g.std_error[n];
  }
  o.pass = o.pass && g.holds;
  o.detail = fmt("max (sigma_n - lambda_n)/SE=%.2f, cond(big)=%.3g cond(sub)=%.3g", worst, g.condition_big,
                 g.condition_sub);
  return o;
}

Outcome ac9() {
  Outcome o;
  const Model m;
  const Eigen::VectorXd transport = 2.0 * m.base.measure.points().col(0);
  const DiscreteMeasure base_b(as_field(transport), m.base.measure.weights());
  const std::vector<CylindricalFunction> fs = {catalogue::function("mean"),
                                               catalogue::function("second_moment"),
                                               catalogue::function("tanh(x2)")};
  const auto r = reference_invariance_check(m.basis, base_b, transport, m.spectrum, fs, 10'000, 900, 0.01);
  double min_p = 1.0;
  for (const auto& row : r.rows) min_p = std::min(min_p, row.ks.p_value);
  o.pass = r.holds && r.rows.size() == 3;
  o.detail = fmt("min KS p-value=%.3f against per-test level %.4f", min_p, 0.01 / 3.0);
  return o;
}

Outcome ac10() {
  Outcome o;
  std::size_t failures = 0;
  for (int l : {1, 2, 3}) {
    for (int i = -1000; i <= 1000; ++i) {
      const double s = l * i / 1000.0;
      if (chi(l, s) != s) ++failures;
    }
    const double h = 1e-7;
    for (int i = 0; i < 10'000; ++i) {
      const double s = -3.0 * l + 6.0 * l * (i + 0.5) / 10'000.0;
      const double fd = (chi(l, s + h) - chi(l, s - h)) / (2 * h);
      const double lower = std::abs(s) <= l ? 1.0 : 0.0;
      const double upper = std::abs(s) <= 2 * l ? 1.0 : 0.0;
      // FD averages chi' over [s-h, s+h]; chi' is (1/l)-Lipschitz.
      if (fd < lower - 1e-6 || fd > upper + 1e-6) ++failures;
    }
  }
  std::mt19937_64 g(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = oracle::random_measure(g, 3 + static_cast<std::size_t>(trial) % 10, 1 + static_cast<std::size_t>(trial) % 3);
    double radius = 0.0;
    for (Eigen::Index i = 0; i < mu.points().rows(); ++i) radius = std::max(radius, mu.points().row(i).norm());
    for (double p : {1.0, 2.0}) {
      double prev = u_k_ref(1, mu, p);
      for (int k = 2; k <= 8; ++k) {
        const double u = u_k_ref(k, mu, p);
        if (u > prev) ++failures;
        if (k > radius && u != 0.0) ++failures;
        prev = u;
      }
    }
  }
  o.pass = failures == 0;
  o.detail = fmt("failures=%g (chi identity, derivative envelope, u_k monotone and vanishing)",
                 static_cast<double>(failures));
  return o;
}

Outcome ac11() {
  Outcome o;
  std::mt19937_64 g(11);
  std::uniform_int_distribution<std::size_t> size(1, 32);
  double worst_exact = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double p = k % 2 == 0 ? 1.0 : 2.0;
    const auto mu = oracle::random_measure_1d(g, size(g), k % 3 == 0);
    const auto nu = oracle::random_measure_1d(g, size(g), k % 3 == 0);
    worst_exact = std::max(worst_exact, std::abs(w_exact(mu, nu, p).distance - w1d(mu, nu, p).distance));
  }
  double worst_sinkhorn = 0.0;
  std::size_t unconverged = 0;
  std::uniform_int_distribution<std::size_t> small(5, 24);
  for (int k = 0; k < 50; ++k) {
    const double p = k % 2 == 0 ? 1.0 : 2.0;
    const std::size_t d = 1 + static_cast<std::size_t>(k) % 2;
    const auto mu = oracle::random_measure(g, small(g), d);
    const auto nu = oracle::random_measure(g, small(g), d);
    const double diam = cross_diameter(mu, nu);
    const auto s = w_sinkhorn(mu, nu, p, 1e-4 * std::pow(diam, p));
    if (!s.converged) ++unconverged;
    worst_sinkhorn = std::max(worst_sinkhorn, std::abs(s.distance_estimate - w_exact(mu, nu, p).distance) / diam);
  }
  o.pass = worst_exact <= 1e-10 && worst_sinkhorn <= 1e-2;
  o.detail = fmt("max|w_exact - w1d|=%.2e (200 instances); max|sinkhorn - exact|/diam=%.2e (50 instances, %g unconverged)",
                 worst_exact, worst_sinkhorn, static_cast<double>(unconverged));
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "heat-kernel per-mode bound", 1.0, ac1},
      {"AC2", "spectral product and partial-trace shadow", 1.0, ac2},
      {"AC3", "push-forward contraction", 5.0, ac3},
      {"AC4", "chain rule", 5.0, ac4},
      {"AC5", "intrinsic derivative", 5.0, ac5},
      {"AC6", "integration by parts", 60.0, ac6},
      {"AC7", "semigroup eigen decay", 60.0, ac7},
      {"AC8", "Courant-Fischer comparison", 60.0, ac8},
      {"AC9", "reference-point invariance", 30.0, ac9},
      {"AC10", "reference functions", 5.0, ac10},
      {"AC11", "solver cross-validation", 60.0, ac11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%-4s %s  %s: %s [%.2fs / %.0fs budget%s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), elapsed, c.budget_s, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
