#include "wasslab/ou_sim.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "wasslab/parallel.hpp"
#include "wasslab/rng.hpp"

namespace wasslab {

namespace {

void check_mode(const Spectrum& spectrum, std::size_t mode) {
  if (mode >= spectrum.size()) throw std::invalid_argument("mode index out of range");
}

void check_degree(int k) {
  if (k < 0 || k > 6) throw std::invalid_argument("Hermite degree must be in [0, 6]");
}

constexpr std::size_t kChunks = 64;

}  // namespace

DiscreteMeasure OUPathSample::pushed(std::size_t k, const EigenBasis& basis) const {
  return DiscreteMeasure(as_field(basis.anchored(state(k))), basis.base().weights());
}

void ou_step(const Spectrum& spectrum, double dt, Eigen::VectorXd& c, const Eigen::VectorXd& z) {
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    c[n] = ou_transition(spectrum.alpha(static_cast<std::size_t>(n)), dt, c[n], z[n]);
  }
}

OUPathSample simulate_path(const Spectrum& spectrum, const std::vector<double>& t_grid,
                           const PathInit& init, std::uint64_t seed, std::uint64_t path_index) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  if (!(t_grid.front() >= 0.0)) throw std::invalid_argument("time grid must start at t >= 0");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
  auto engine = rng::stream(seed, path_index);
  const auto M = static_cast<Eigen::Index>(spectrum.size());
  Eigen::VectorXd c;
  if (std::holds_alternative<StationaryInit>(init)) {
    draw_gaussian_coeffs(spectrum, engine, c);
  } else {
    c = std::get<Eigen::VectorXd>(init);
    if (c.size() != M) throw std::invalid_argument("initial coefficients need one entry per mode");
  }

  std::normal_distribution<double> normal;
  Eigen::VectorXd z(M);
  std::vector<Eigen::VectorXd> states;
  states.reserve(t_grid.size());
  // The process starts at time 0; a positive t_0 is reached by a first step.
  double t_prev = 0.0;
  for (const double t : t_grid) {
    if (t > t_prev) {
      for (Eigen::Index n = 0; n < M; ++n) z[n] = normal(engine);
      ou_step(spectrum, t - t_prev, c, z);
    }
    states.push_back(c);
    t_prev = t;
  }
  return OUPathSample(t_grid, std::move(states), seed);
}

void write_path_csv(std::ostream& out, const OUPathSample& path) {
  out << "t,mode,coeff\n";
  char buf[96];
  for (std::size_t k = 0; k < path.t_grid().size(); ++k) {
    const auto& c = path.state(k);
    for (Eigen::Index n = 0; n < c.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g,%td,%.17g\n", path.t_grid()[k], n + 1, c[n]);
      out << buf;
    }
  }
}

std::vector<DiscreteMeasure> sample_invariant(const Spectrum& spectrum, const EigenBasis& basis,
                                              std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_invariant needs n >= 1");
  if (spectrum.size() != basis.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  std::vector<DiscreteMeasure> out(n);
  for_each_chunk(n, kChunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::VectorXd c;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      draw_gaussian_coeffs(spectrum, engine, c);
      out[i] = DiscreteMeasure(as_field(basis.anchored(c)), basis.base().weights());
    }
  });
  return out;
}

SemigroupCheck semigroup_eigen_check(int k, const Spectrum& spectrum, std::size_t mode, double t,
                                     double x0, std::size_t n_samples, std::uint64_t seed) {
  check_degree(k);
  check_mode(spectrum, mode);
  if (!(t > 0.0)) throw std::invalid_argument("semigroup check needs t > 0");
  if (n_samples < 2) throw std::invalid_argument("semigroup check needs at least 2 samples");
  const double alpha = spectrum.alpha(mode);
  std::vector<double> values(n_samples);
  for_each_chunk(n_samples, kChunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::normal_distribution<double> normal;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      values[i] = hermite_eigenfunction(k, alpha, ou_transition(alpha, t, x0, normal(engine)));
    }
  });
  SemigroupCheck out;
  out.lhs = estimate_mean(values, seed);
  out.rhs = std::exp(-k * alpha * t) * hermite_eigenfunction(k, alpha, x0);
  out.holds = std::abs(out.lhs.value - out.rhs) <= 4.0 * out.lhs.std_error;
  return out;
}

SemigroupCheck semigroup_eigen_check_stationary(int k, const Spectrum& spectrum,
                                                std::size_t mode, double t,
                                                std::size_t n_samples, std::uint64_t seed) {
  check_degree(k);
  check_mode(spectrum, mode);
  if (!(t > 0.0)) throw std::invalid_argument("semigroup check needs t > 0");
  if (n_samples < 2) throw std::invalid_argument("semigroup check needs at least 2 samples");
  const double alpha = spectrum.alpha(mode);
  std::vector<double> values(n_samples);
  for_each_chunk(n_samples, kChunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::normal_distribution<double> normal;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      const double x0 = normal(engine) / std::sqrt(alpha);
      values[i] = hermite_eigenfunction(k, alpha, ou_transition(alpha, t, x0, normal(engine)));
    }
  });
  SemigroupCheck out;
  out.lhs = estimate_mean(values, seed);
  out.rhs = k == 0 ? 1.0 : 0.0;
  out.holds = std::abs(out.lhs.value - out.rhs) <= 4.0 * out.lhs.std_error;
  return out;
}

MCEstimate generator_residual(int k, const Spectrum& spectrum, std::size_t mode, double t,
                              std::span<const double> x0, std::uint64_t seed) {
  check_degree(k);
  check_mode(spectrum, mode);
  if (!(t >= 0.0)) throw std::invalid_argument("generator residual needs t >= 0");
  if (x0.size() < 2) throw std::invalid_argument("generator residual needs at least 2 paths");
  const double alpha = spectrum.alpha(mode);
  const double decay = std::exp(-k * alpha * t);
  std::vector<double> values(x0.size());
  for_each_chunk(x0.size(), kChunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::normal_distribution<double> normal;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      const double xt = ou_transition(alpha, t, x0[i], normal(engine));
      values[i] = hermite_eigenfunction(k, alpha, xt) - decay * hermite_eigenfunction(k, alpha, x0[i]);
    }
  });
  return estimate_mean(values, seed);
}

IbpCheck ibp_check(const TangentFunction& u, const TangentFunction& v, std::size_t mode,
                   const Spectrum& spectrum, const EigenBasis& basis, std::size_t n_samples,
                   std::uint64_t seed) {
  check_mode(spectrum, mode);
  if (spectrum.size() != basis.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  if (n_samples < 2) throw std::invalid_argument("IBP check needs at least 2 samples");
  const double alpha = spectrum.alpha(mode);
  const auto n = static_cast<Eigen::Index>(mode);
  std::vector<double> lhs(n_samples), rhs(n_samples), diff(n_samples);
  for_each_chunk(n_samples, kChunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::VectorXd c;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      draw_gaussian_coeffs(spectrum, engine, c);
      const TangentState state(basis, c);
      const auto ju = u.jet(state);
      const auto jv = v.jet(state);
      const double du = u.partials(state, ju)[n];
      const double dv = v.partials(state, jv)[n];
      lhs[i] = du * jv.value;
      rhs[i] = -ju.value * (dv - alpha * jv.value * c[n]);
      diff[i] = lhs[i] - rhs[i];
    }
  });
  IbpCheck out;
  out.lhs = estimate_mean(lhs, seed);
  out.rhs = estimate_mean(rhs, seed);
  out.difference = estimate_mean(diff, seed);
  out.holds = std::abs(out.difference.value) <= 4.0 * out.difference.std_error;
  return out;
}

IbpCheck ibp_check(const CylindricalFunction& u, const CylindricalFunction& v, std::size_t mode,
                   const Spectrum& spectrum, const EigenBasis& basis, std::size_t n_samples,
                   std::uint64_t seed) {
  return ibp_check(TangentFunction::pullback(u), TangentFunction::pullback(v), mode, spectrum,
                   basis, n_samples, seed);
}

}  // namespace wasslab
