#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wasslab/calculus.hpp"
#include "wasslab/dirichlet.hpp"
#include "wasslab/ou_sim.hpp"
#include "wasslab/rng.hpp"
#include "wasslab/tangent.hpp"
#include "wasslab/wasserstein.hpp"
#include "wasslab_cli/run.hpp"

namespace wasslab::cli {
namespace {

std::string fmt_t(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

CylindricalFunction named_function(const std::string& name) {
  try {
    return catalogue::function(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("unknown catalogue function '" + name + "': " + e.what());
  }
}

std::vector<CylindricalFunction> named_functions(const Config& cfg, const std::string& key) {
  std::vector<CylindricalFunction> out;
  for (const auto& name : cfg.list(key)) out.push_back(named_function(name));
  if (out.empty()) throw ConfigError(key + " is empty");
  return out;
}

// 1-based mode list from config, checked against M.
std::vector<std::size_t> modes_from(const Config& cfg, const std::string& key, std::size_t M) {
  std::vector<std::size_t> out;
  for (double v : cfg.reals(key)) {
    if (v < 1 || v != std::floor(v) || v > static_cast<double>(M)) {
      throw ConfigError(key + ": modes must be integers in [1, basis.M]");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Tangent-space dictionary entries: catalogue pull-backs, plus coeff_<n>
// (the coordinate c_n) and hermite_<n>_<k>.
TangentFunction dictionary_entry(const std::string& name, const Model& m) {
  const auto parse_mode = [&](const std::string& s) {
    std::size_t n = 0;
    try {
      n = std::stoul(s);
    } catch (const std::exception&) {
      throw ConfigError("bad dictionary entry '" + name + "'");
    }
    if (n < 1 || n > m.spectrum.size()) throw ConfigError("mode out of range in '" + name + "'");
    return n - 1;
  };
  if (name.rfind("coeff_", 0) == 0) return TangentFunction::coefficient(parse_mode(name.substr(6)));
  if (name.rfind("hermite_", 0) == 0) {
    const auto rest = name.substr(8);
    const auto us = rest.find('_');
    if (us == std::string::npos) throw ConfigError("expected hermite_<mode>_<degree>: '" + name + "'");
    const std::size_t mode = parse_mode(rest.substr(0, us));
    int degree = 0;
    try {
      degree = std::stoi(rest.substr(us + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad Hermite degree in '" + name + "'");
    }
    if (degree < 0) throw ConfigError("bad Hermite degree in '" + name + "'");
    return TangentFunction::hermite(mode, degree, m.spectrum.alpha(mode));
  }
  return TangentFunction::pullback(named_function(name));
}

Eigen::VectorXd gaussian_field(const Model& m, std::uint64_t seed, std::uint64_t i) {
  auto engine = rng::stream(seed, i);
  Eigen::VectorXd c;
  draw_gaussian_coeffs(m.spectrum, engine, c);
  return m.basis.anchored(c);
}

void chain_rule_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t trials = cfg.count("calculus.trials");
  const double tol = cfg.positive("tolerance.chain_rule");
  const auto& base = m.base.measure;
  for (const auto& u : named_functions(cfg, "calculus.functions")) {
    double worst_chain = 0.0;
    double worst_fd = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const Field phi = as_field(gaussian_field(m, rng::derive(seed, 11), i));
      auto engine = rng::stream(rng::derive(seed, 12), i);
      std::normal_distribution<double> normal;
      Eigen::VectorXd xi_c(static_cast<Eigen::Index>(m.basis.modes()));
      for (auto& x : xi_c) x = normal(engine);
      const Field xi = as_field(m.basis.synthesize(xi_c));
      const DiscreteMeasure mu = pushforward(base, phi);
      const double analytic = derivative_pairing(u, mu, xi);
      const double scale = std::max(1.0, std::abs(analytic));
      const double h = default_fd_step(phi.cwiseAbs().maxCoeff());
      worst_chain = std::max(worst_chain, chain_rule_residual(u, base, phi, xi, h) / scale);
      worst_fd = std::max(worst_fd,
                          std::abs(directional_derivative_fd(u, mu, xi, h) - analytic) / scale);
    }
    r.add({"chain_rule_rel_residual[" + u.name() + "]", worst_chain, 0.0, tol, worst_chain <= tol, seed});
    r.add({"intrinsic_fd_rel_residual[" + u.name() + "]", worst_fd, 0.0, tol, worst_fd <= tol, seed});
  }
}

void lipschitz_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t trials = cfg.count("calculus.trials");
  const double tol = cfg.positive("tolerance.lipschitz");
  const double mono_tol = cfg.positive("tolerance.monotone");
  const auto& base = m.base.measure;
  for (double p : {1.0, 2.0}) {
    double excess = -std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      Eigen::VectorXd a = gaussian_field(m, rng::derive(seed, 21), i);
      Eigen::VectorXd b = gaussian_field(m, rng::derive(seed, 22), i);
      const auto distance = [&] {
        const double w = w1d(pushforward(base, as_field(a)), pushforward(base, as_field(b)), p).distance;
        return w - tangent_norm(base, as_field(a - b), p);
      };
      excess = std::max(excess, distance());
      // Both fields nondecreasing along the sorted atoms: equality case.
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      gap = std::max(gap, std::abs(distance()));
    }
    const std::string tag = "p" + fmt_t(p);
    r.add({"psi_contraction_excess[" + tag + "]", excess, 0.0, tol, excess <= tol, seed});
    r.add({"psi_monotone_gap[" + tag + "]", gap, 0.0, mono_tol, gap <= mono_tol, seed});
  }
}

void ibp_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t n = cfg.count("mc.n_samples");
  const double k = cfg.positive("tolerance.sigma");
  const auto fs = named_functions(cfg, "calculus.functions");
  const auto modes = modes_from(cfg, "ibp.modes", m.spectrum.size());
  for (const auto& u : fs) {
    for (const auto& v : fs) {
      for (std::size_t mode : modes) {
        const auto c = ibp_check(u, v, mode - 1, m.spectrum, m.basis, n, seed);
        const double tol = k * c.difference.std_error;
        r.add({"ibp_difference[" + u.name() + "|" + v.name() + "|mode=" + std::to_string(mode) + "]",
               c.difference.value, c.difference.std_error, tol,
               std::abs(c.difference.value) <= tol, seed});
      }
    }
  }
  for (std::size_t mode : modes) {
    // u = c_n, v = 1: both sides equal 1.
    const auto c = ibp_check(TangentFunction::coefficient(mode - 1), TangentFunction::constant(1.0),
                             mode - 1, m.spectrum, m.basis, n, seed);
    const double tol = k * c.rhs.std_error;
    r.add({"ibp_linear_rhs_minus_1[mode=" + std::to_string(mode) + "]", c.rhs.value - 1.0,
           c.rhs.std_error, tol, std::abs(c.rhs.value - 1.0) <= tol, seed});
  }
}

void semigroup_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t n = cfg.count("mc.n_samples");
  const double k_sigma = cfg.positive("tolerance.sigma");
  const double x0 = cfg.real("semigroup.x0");
  const auto modes = modes_from(cfg, "semigroup.modes", m.spectrum.size());
  for (double kd : cfg.reals("semigroup.degrees")) {
    if (kd < 0 || kd > 6 || kd != std::floor(kd)) throw ConfigError("semigroup.degrees must be in 0..6");
    const int k = static_cast<int>(kd);
    for (std::size_t mode : modes) {
      for (double t : cfg.reals("semigroup.times")) {
        if (!(t > 0.0)) throw ConfigError("semigroup.times must be positive");
        const auto c = semigroup_eigen_check(k, m.spectrum, mode - 1, t, x0, n, seed);
        const double value = c.lhs.value - c.rhs;
        const double tol = k_sigma * c.lhs.std_error;
        r.add({"semigroup_residual[k=" + std::to_string(k) + "|mode=" + std::to_string(mode) +
                   "|t=" + fmt_t(t) + "]",
               value, c.lhs.std_error, tol, std::abs(value) <= tol, seed});
      }
    }
  }
}

void orthonormality_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const double tol = cfg.positive("tolerance.orthonormality");
  constexpr int kMaxDegree = 6;
  std::vector<double> z, w;
  gauss_hermite(40, z, w);
  for (std::size_t mode = 0; mode < std::min<std::size_t>(m.spectrum.size(), 3); ++mode) {
    const double alpha = m.spectrum.alpha(mode);
    double worst = 0.0;
    for (int j = 0; j <= kMaxDegree; ++j) {
      for (int k = 0; k <= kMaxDegree; ++k) {
        double acc = 0.0;
        for (std::size_t q = 0; q < z.size(); ++q) {
          const double x = z[q] / std::sqrt(alpha);
          acc += w[q] * hermite_eigenfunction(j, alpha, x) * hermite_eigenfunction(k, alpha, x);
        }
        worst = std::max(worst, std::abs(acc - (j == k ? 1.0 : 0.0)));
      }
    }
    r.add({"hermite_gram_error[mode=" + std::to_string(mode + 1) + "]", worst, 0.0, tol,
           worst <= tol, seed});
  }
  const double err = m.basis.gram_error();
  r.add({"basis_gram_error", err, 0.0, m.basis.gram_tol(), err <= m.basis.gram_tol(), seed});
}

void c1_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t n = cfg.count("mc.n_samples");
  const double k = cfg.positive("tolerance.sigma");
  const double C = cfg.positive("c1.C");
  const double p = cfg.real("calculus.p");
  if (!(p >= 1.0)) throw ConfigError("calculus.p must be >= 1");
  const auto sample = sample_invariant(m.spectrum, m.basis, std::min<std::size_t>(n, 2000), seed);
  for (const auto& u : named_functions(cfg, "calculus.functions")) {
    const auto rep = c1_functional(u, sample, p);
    r.add({"c1_sampled_sup[" + u.name() + "]", rep.sup_dual_norm_estimate, 0.0, rep.uniform_bound,
           rep.sup_dual_norm_estimate <= rep.uniform_bound, seed});
    const auto e = c1_energy_check(u, m.spectrum, m.basis, C, n, seed);
    const double tol = C * e.bound + k * e.energy.std_error;
    r.add({"c1_energy[" + u.name() + "]", e.energy.value, e.energy.std_error, tol,
           e.energy.value <= tol, seed});
  }
}

void galerkin_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const std::size_t n = cfg.count("mc.n_samples");
  const double k = cfg.positive("tolerance.sigma");
  const auto big_names = cfg.list("galerkin.big");
  std::vector<TangentFunction> big;
  for (const auto& name : big_names) big.push_back(dictionary_entry(name, m));
  std::vector<std::size_t> sub;
  for (const auto& name : cfg.list("galerkin.sub")) {
    const auto it = std::find(big_names.begin(), big_names.end(), name);
    if (it == big_names.end()) throw ConfigError("galerkin.sub entry '" + name + "' is not in galerkin.big");
    if (!big[static_cast<std::size_t>(it - big_names.begin())].is_pullback()) {
      throw ConfigError("galerkin.sub entry '" + name + "' is not a pull-back");
    }
    sub.push_back(static_cast<std::size_t>(it - big_names.begin()));
  }
  GalerkinOptions options;
  options.batches = cfg.count("galerkin.batches");
  const auto g = galerkin_eig_compare(big, sub, m.spectrum, m.basis, n, seed, options);
  for (std::size_t i = 0; i < g.lambda.size(); ++i) {
    const double value = g.sigma[i] - g.lambda[i];
    const double tol = k * g.std_error[i];
    r.add({"galerkin_sigma_minus_lambda[" + std::to_string(i + 1) + "]", value, g.std_error[i], tol,
           value <= tol, seed});
  }
  r.add({"galerkin_condition_big", g.condition_big, 0.0, options.max_condition, true, seed});
  r.add({"galerkin_condition_sub", g.condition_sub, 0.0, options.max_condition, true, seed});
}

void invariance_suite(const Config& cfg, const Model& m, Report& r) {
  const std::uint64_t seed = cfg.seed();
  const double scale = cfg.real("invariance.scale");
  if (scale == 0.0) throw ConfigError("invariance.scale must be nonzero");
  const double level = cfg.positive("tolerance.ks_level");
  const auto fs = named_functions(cfg, "invariance.functionals");
  const Eigen::VectorXd transport = scale * m.base.measure.points().col(0);
  const DiscreteMeasure base_b(as_field(transport), m.base.measure.weights());
  const auto rep = reference_invariance_check(m.basis, base_b, transport, m.spectrum, fs,
                                              cfg.count("invariance.n"), seed, level);
  const double per_test = level / static_cast<double>(rep.rows.size());
  for (const auto& row : rep.rows) {
    r.add({"invariance_ks_pvalue[" + row.functional + "]", row.ks.p_value, 0.0, per_test, row.holds,
           seed});
  }
}

using SuiteFn = void (*)(const Config&, const Model&, Report&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"chain-rule", chain_rule_suite},   {"lipschitz", lipschitz_suite},
      {"ibp", ibp_suite},                 {"semigroup", semigroup_suite},
      {"orthonormality", orthonormality_suite}, {"c1", c1_suite},
      {"galerkin", galerkin_suite},       {"invariance", invariance_suite},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suites()) out.push_back(name);
    out.push_back("all");
    return out;
  }();
  return names;
}

std::unique_ptr<const Model> build_model(const Config& cfg) {
  const std::size_t M = cfg.count("basis.M");
  if (M == 0) throw ConfigError("basis.M must be at least 1");
  SpectrumFamily family;
  const auto& kind = cfg.str("spectrum.family");
  if (kind == "power") {
    family = PowerLaw{cfg.positive("spectrum.a"), cfg.real("spectrum.s")};
    if (!(std::get<PowerLaw>(family).s > 1.0)) throw ConfigError("spectrum.s must exceed 1");
  } else if (kind == "list") {
    family = ExplicitList{cfg.reals("spectrum.values")};
  } else {
    throw ConfigError("spectrum.family must be 'power' or 'list'");
  }
  if (cfg.str("base.kind") != "uniform01") {
    throw ConfigError("base.kind must be uniform01 (the cosine basis needs it)");
  }
  try {
    auto spectrum = make_spectrum(family, M);
    auto base = make_base_measure(BaseKind::uniform01, cfg.count("base.N"));
    auto basis = eigenbasis_cosine(base, M);
    return std::make_unique<const Model>(Model{std::move(spectrum), std::move(base), std::move(basis)});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Report run_suite(const std::string& suite, const Config& cfg) {
  const auto model = build_model(cfg);
  Report report;
  report.name = suite;
  bool found = false;
  for (const auto& [name, fn] : suites()) {
    if (suite == name || suite == "all") {
      fn(cfg, *model, report);
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown suite '" + suite + "'");
  return report;
}

Report heat_bound_report(const Config& cfg) {
  const auto model = build_model(cfg);
  const double t = cfg.positive("heat.t");
  const std::uint64_t seed = cfg.seed();
  Report report;
  report.name = "heat-bound";
  for (std::size_t n = 0; n < model->spectrum.size(); ++n) {
    const double alpha = model->spectrum.alpha(n);
    const double exact = mode_trace_exact(alpha, t);
    const double bound = mode_trace_bound(alpha, t);
    report.add({"mode_trace[" + std::to_string(n + 1) + "]", exact, 0.0, bound, exact <= bound, seed});
  }
  HeatKernelBound hk;
  try {
    hk = heat_kernel_sq_bound(model->spectrum, t);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  report.add({"log_product_head", hk.log_exact_head, 0.0, hk.log_head, hk.log_exact_head <= hk.log_head, seed});
  report.add({"log_product_tail_bound", hk.log_tail_bound, 0.0, hk.log_tail_bound, true, seed});
  report.add({"log_product", hk.log_exact_head, 0.0, hk.log_bound(), hk.log_exact_head <= hk.log_bound(), seed});
  return report;
}

void gauss_hermite(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
  // recurrence (off-diagonal sqrt(k)).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 1; k < J.rows(); ++k) {
    J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.assign(es.eigenvalues().begin(), es.eigenvalues().end());
  weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
    weights[i] = v * v;
  }
}

}  // namespace wasslab::cli
