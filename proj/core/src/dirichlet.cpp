#include "wasslab/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

#include "wasslab/parallel.hpp"
#include "wasslab/rng.hpp"

namespace wasslab {

CoefficientField CoefficientField::identity() { return {}; }

CoefficientField CoefficientField::diagonal(Eigen::VectorXd q) {
  if ((q.array() < 0.0).any()) {
    throw std::invalid_argument("diagonal coefficient entries must be non-negative");
  }
  CoefficientField out;
  out.kind_ = Kind::diagonal;
  out.entries_ = std::move(q);
  return out;
}

CoefficientField CoefficientField::rank_one(Eigen::VectorXd eta_coeffs) {
  if (!eta_coeffs.allFinite()) throw std::invalid_argument("rank-one direction must be finite");
  CoefficientField out;
  out.kind_ = Kind::rank_one;
  out.entries_ = std::move(eta_coeffs);
  return out;
}

CoefficientField CoefficientField::rank_one(const EigenBasis& basis,
                                            const Eigen::VectorXd& eta_field) {
  return rank_one(basis.coefficients(eta_field));
}

double CoefficientField::pair(const EigenBasis& basis, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b) const {
  const auto& w = basis.base().weights();
  switch (kind_) {
    case Kind::identity:
      return (a.array() * b.array() * w.array()).sum();
    case Kind::diagonal: {
      if (static_cast<std::size_t>(entries_.size()) != basis.modes()) {
        throw std::invalid_argument("diagonal coefficient needs one entry per mode");
      }
      const Eigen::VectorXd pa = basis.project(a);
      const Eigen::VectorXd pb = basis.project(b);
      return (entries_.array() * pa.array() * pb.array()).sum();
    }
    case Kind::rank_one: {
      const Eigen::VectorXd eta = basis.synthesize(entries_);
      return (eta.array() * a.array() * w.array()).sum() *
             (eta.array() * b.array() * w.array()).sum();
    }
  }
  return 0.0;
}

double square_field(const TangentFunction& u, const TangentFunction& v,
                    const TangentState& state, const CoefficientField& Q) {
  return Q.pair(state.basis(), u.gradient(state), v.gradient(state));
}

std::vector<double> form_energy_terms(const TangentFunction& u, const TangentFunction& v,
                                      const CoefficientField& Q, const Spectrum& spectrum,
                                      const EigenBasis& basis, std::size_t n_samples,
                                      std::uint64_t seed) {
  if (spectrum.size() != basis.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  std::vector<double> terms(n_samples);
  for_each_chunk(n_samples, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::VectorXd c;
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      draw_gaussian_coeffs(spectrum, engine, c);
      const TangentState state(basis, c);
      const auto gu = u.gradient(state);
      terms[i] = &u == &v ? Q.pair(basis, gu, gu) : Q.pair(basis, gu, v.gradient(state));
    }
  });
  return terms;
}

MCEstimate form_energy_bilinear_mc(const TangentFunction& u, const TangentFunction& v,
                                   const CoefficientField& Q, const Spectrum& spectrum,
                                   const EigenBasis& basis, std::size_t n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("energy estimate needs at least 2 samples");
  const auto terms = form_energy_terms(u, v, Q, spectrum, basis, n_samples, seed);
  return estimate_mean(terms, seed);
}

MCEstimate form_energy_mc(const TangentFunction& u, const CoefficientField& Q,
                          const Spectrum& spectrum, const EigenBasis& basis,
                          std::size_t n_samples, std::uint64_t seed) {
  return form_energy_bilinear_mc(u, u, Q, spectrum, basis, n_samples, seed);
}

MCEstimate form_energy_mc(const CylindricalFunction& u, const CoefficientField& Q,
                          const Spectrum& spectrum, const EigenBasis& basis,
                          std::size_t n_samples, std::uint64_t seed) {
  return form_energy_mc(TangentFunction::pullback(u), Q, spectrum, basis, n_samples, seed);
}

std::vector<double> measure_energy_terms(const CylindricalFunction& u,
                                         std::span<const DiscreteMeasure> measures) {
  std::vector<double> out;
  out.reserve(measures.size());
  for (const auto& mu : measures) {
    const Field grad = u.derivative_at_atoms(mu);
    out.push_back((grad.rowwise().squaredNorm().array() * mu.weights().array()).sum());
  }
  return out;
}

C1EnergyCheck c1_energy_check(const CylindricalFunction& u, const Spectrum& spectrum,
                              const EigenBasis& basis, double C, std::size_t n_samples,
                              std::uint64_t seed) {
  if (!(C > 0.0)) throw std::invalid_argument("energy constant C must be positive");
  C1EnergyCheck out;
  out.energy = form_energy_mc(u, CoefficientField::identity(), spectrum, basis, n_samples, seed);
  const double b = u.uniform_gradient_bound();
  out.bound = b * b;
  out.holds = out.energy.value - 4.0 * out.energy.std_error <= C * out.bound;
  return out;
}

}  // namespace wasslab
