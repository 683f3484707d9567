#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wasslab/ou_sim.hpp"
#include "wasslab/rng.hpp"

namespace wasslab {

namespace {

// perm[j] = i with transport[i] == y_j.
std::vector<std::size_t> match_atoms(const DiscreteMeasure& base_a, const DiscreteMeasure& base_b,
                                     const Eigen::VectorXd& transport) {
  const std::size_t N = base_a.size();
  if (base_b.size() != N) throw std::invalid_argument("bases must share the atom count");
  if (base_a.dim() != 1 || base_b.dim() != 1) {
    throw std::invalid_argument("reference transport supports d = 1 only");
  }
  if (static_cast<std::size_t>(transport.size()) != N || !transport.allFinite()) {
    throw std::invalid_argument("transport must give one finite value per atom");
  }
  const double scale = 1.0 + transport.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * scale;

  std::vector<std::size_t> by_image(N), by_target(N);
  std::iota(by_image.begin(), by_image.end(), 0);
  std::iota(by_target.begin(), by_target.end(), 0);
  std::sort(by_image.begin(), by_image.end(),
            [&](std::size_t a, std::size_t b) { return transport[a] < transport[b]; });
  const auto& y = base_b.points();
  std::sort(by_target.begin(), by_target.end(),
            [&](std::size_t a, std::size_t b) { return y(a, 0) < y(b, 0); });
  for (std::size_t k = 1; k < N; ++k) {
    if (transport[by_image[k]] - transport[by_image[k - 1]] <= tol) {
      throw std::invalid_argument("transport is not invertible on the atoms (collision)");
    }
  }
  std::vector<std::size_t> perm(N);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t i = by_image[k];
    const std::size_t j = by_target[k];
    if (std::abs(transport[i] - y(j, 0)) > tol) {
      throw std::invalid_argument("base_b is not the image of base_a under the transport");
    }
    if (std::abs(base_a.weight(i) - base_b.weight(j)) > 1e-12) {
      throw std::invalid_argument("base_b weights do not match the transported weights");
    }
    perm[j] = i;
  }
  return perm;
}

std::vector<double> statistic_sample(const EigenBasis& basis, const Spectrum& spectrum,
                                     const CylindricalFunction& f, std::size_t n,
                                     std::uint64_t seed) {
  std::vector<double> out(n);
  Eigen::VectorXd c;
  for (std::size_t i = 0; i < n; ++i) {
    auto engine = rng::stream(seed, i);
    draw_gaussian_coeffs(spectrum, engine, c);
    out[i] = f(DiscreteMeasure(as_field(basis.anchored(c)), basis.base().weights()));
  }
  return out;
}

}  // namespace

EigenBasis transport_basis(const EigenBasis& basis_a, const DiscreteMeasure& base_b,
                           const Eigen::VectorXd& transport) {
  const auto perm = match_atoms(basis_a.base(), base_b, transport);
  const auto N = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd values(N, basis_a.values().cols());
  Eigen::VectorXd anchor(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const auto i = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]);
    values.row(j) = basis_a.values().row(i);
    anchor[j] = basis_a.anchor()[i];
  }
  return EigenBasis(base_b, std::move(values), std::move(anchor));
}

InvarianceReport reference_invariance_check(const EigenBasis& basis_a,
                                            const DiscreteMeasure& base_b,
                                            const Eigen::VectorXd& transport,
                                            const Spectrum& spectrum,
                                            std::span<const CylindricalFunction> functionals,
                                            std::size_t n, std::uint64_t seed, double level) {
  if (functionals.empty()) throw std::invalid_argument("no test functionals");
  if (n < 2) throw std::invalid_argument("invariance check needs n >= 2");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  if (spectrum.size() != basis_a.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  const EigenBasis basis_b = transport_basis(basis_a, base_b, transport);

  InvarianceReport report;
  report.level = level;
  report.holds = true;
  const double per_test = level / static_cast<double>(functionals.size());
  const std::uint64_t seed_a = rng::derive(seed, 1);
  const std::uint64_t seed_b = rng::derive(seed, 2);
  for (const auto& f : functionals) {
    InvarianceRow row;
    row.functional = f.name();
    row.ks = ks_two_sample(statistic_sample(basis_a, spectrum, f, n, seed_a),
                           statistic_sample(basis_b, spectrum, f, n, seed_b));
    row.holds = row.ks.p_value > per_test;
    report.holds = report.holds && row.holds;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace wasslab
