#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wasslab/calculus.hpp"
#include "wasslab/measure.hpp"
#include "wasslab/spectral.hpp"
#include "wasslab/stats.hpp"
#include "wasslab/tangent.hpp"

namespace wasslab {

struct StationaryInit {};
using PathInit = std::variant<StationaryInit, Eigen::VectorXd>;

/// One path of the mode coefficients c(t) on a time grid. Immutable.
class OUPathSample {
 public:
  OUPathSample(std::vector<double> t_grid, std::vector<Eigen::VectorXd> states, std::uint64_t seed)
      : t_grid_(std::move(t_grid)), states_(std::move(states)), seed_(seed) {}

  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<Eigen::VectorXd>& states() const { return states_; }
  const Eigen::VectorXd& state(std::size_t k) const { return states_.at(k); }
  std::uint64_t seed() const { return seed_; }

  /// Psi(anchor + sum_n c_n(t_k) phi_n), built on request.
  DiscreteMeasure pushed(std::size_t k, const EigenBasis& basis) const;

 private:
  std::vector<double> t_grid_;
  std::vector<Eigen::VectorXd> states_;
  std::uint64_t seed_;
};

/// Exact per-mode transitions over successive grid increments. Path
/// `path_index` draws from rng::stream(seed, path_index). Throws
/// std::invalid_argument for an empty or non-increasing grid or t_0 < 0.
OUPathSample simulate_path(const Spectrum& spectrum, const std::vector<double>& t_grid,
                           const PathInit& init, std::uint64_t seed,
                           std::uint64_t path_index = 0);

/// Coefficient-only helper used by ensembles: advances c by exact
/// transitions with the given standard normals.
void ou_step(const Spectrum& spectrum, double dt, Eigen::VectorXd& c, const Eigen::VectorXd& z);

void write_path_csv(std::ostream& out, const OUPathSample& path);

/// n independent draws Psi(phi), phi ~ G; draw i uses rng::stream(seed, i).
std::vector<DiscreteMeasure> sample_invariant(const Spectrum& spectrum, const EigenBasis& basis,
                                              std::size_t n, std::uint64_t seed);

struct SemigroupCheck {
  MCEstimate lhs;
  double rhs = 0.0;
  bool holds = false;
};

/// E[H_k(X_t)] from X_0 = x0 in mode `mode` against e^{-k alpha t} H_k(x0).
SemigroupCheck semigroup_eigen_check(int k, const Spectrum& spectrum, std::size_t mode, double t,
                                     double x0, std::size_t n_samples, std::uint64_t seed);

/// Same with X_0 drawn from the stationary law; rhs is 1 for k = 0, else 0.
SemigroupCheck semigroup_eigen_check_stationary(int k, const Spectrum& spectrum,
                                                std::size_t mode, double t,
                                                std::size_t n_samples, std::uint64_t seed);

/// Mean of H_k(X_t^i) - e^{-k alpha t} H_k(x0_i) over the ensemble of
/// starting points. Exactly 0 at t = 0 and for k = 0.
MCEstimate generator_residual(int k, const Spectrum& spectrum, std::size_t mode, double t,
                              std::span<const double> x0, std::uint64_t seed);

struct IbpCheck {
  MCEstimate lhs;         // E[d_n u * v]
  MCEstimate rhs;         // -E[u (d_n v - alpha_n v c_n)]
  MCEstimate difference;  // lhs - rhs, per sample
  bool holds = false;     // |difference| <= 4 SE(difference)
};

/// Integration by parts under G along mode `mode` with common random numbers.
IbpCheck ibp_check(const TangentFunction& u, const TangentFunction& v, std::size_t mode,
                   const Spectrum& spectrum, const EigenBasis& basis, std::size_t n_samples,
                   std::uint64_t seed);
IbpCheck ibp_check(const CylindricalFunction& u, const CylindricalFunction& v, std::size_t mode,
                   const Spectrum& spectrum, const EigenBasis& basis, std::size_t n_samples,
                   std::uint64_t seed);

struct InvarianceRow {
  std::string functional;
  KsResult ks;
  bool holds = false;
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double level = 0.01;  // family-wise; each row is tested at level / rows
  bool holds = false;
};

/// Samples N_G from `basis_a` directly and through the basis transported by
/// the atom map `transport` (values of phi* at the atoms of basis_a.base())
/// onto `base_b`, then compares mu(psi) laws by two-sample KS. Throws
/// std::invalid_argument if phi* collides atoms or base_b is not the image
/// of base_a under phi*.
InvarianceReport reference_invariance_check(const EigenBasis& basis_a,
                                            const DiscreteMeasure& base_b,
                                            const Eigen::VectorXd& transport,
                                            const Spectrum& spectrum,
                                            std::span<const CylindricalFunction> functionals,
                                            std::size_t n, std::uint64_t seed,
                                            double level = 0.01);

/// Basis on base_b representing the same Gaussian field: value at y_j is
/// phi_n(x_{pi(j)}) with phi*(x_{pi(j)}) = y_j, anchor x_{pi(j)}.
EigenBasis transport_basis(const EigenBasis& basis_a, const DiscreteMeasure& base_b,
                           const Eigen::VectorXd& transport);

}  // namespace wasslab
