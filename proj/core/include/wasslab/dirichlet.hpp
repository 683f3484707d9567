#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wasslab/calculus.hpp"
#include "wasslab/measure.hpp"
#include "wasslab/spectral.hpp"
#include "wasslab/stats.hpp"
#include "wasslab/tangent.hpp"

namespace wasslab {

/// Decomposable coefficient Q_phi of the tangent-space form.
class CoefficientField {
 public:
  enum class Kind { identity, diagonal, rank_one };

  static CoefficientField identity();
  /// Q = sum_n q_n phi_n (x) phi_n; q_n >= 0.
  static CoefficientField diagonal(Eigen::VectorXd q);
  /// Q v = <eta, v> eta with eta given by basis coefficients.
  static CoefficientField rank_one(Eigen::VectorXd eta_coeffs);
  /// Rank-one from raw values; converted with the basis Gram correction.
  static CoefficientField rank_one(const EigenBasis& basis, const Eigen::VectorXd& eta_field);

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& entries() const { return entries_; }

  /// <Q a, b>_{T_0} for gradients a, b on the atoms.
  double pair(const EigenBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

 private:
  Kind kind_ = Kind::identity;
  Eigen::VectorXd entries_;  // q for diagonal, eta coefficients for rank_one
};

/// Gamma(u, v)(Psi(phi)) = <Q_phi grad(u o Psi)(phi), grad(v o Psi)(phi)>.
double square_field(const TangentFunction& u, const TangentFunction& v,
                    const TangentState& state, const CoefficientField& Q);

/// Per-sample integrands <Q grad u, grad v> for phi ~ G, sample i drawn from
/// rng::stream(seed, i).
std::vector<double> form_energy_terms(const TangentFunction& u, const TangentFunction& v,
                                      const CoefficientField& Q, const Spectrum& spectrum,
                                      const EigenBasis& basis, std::size_t n_samples,
                                      std::uint64_t seed);

/// E(u, u) = int <Q grad(u o Psi), grad(u o Psi)> dG with CLT error.
MCEstimate form_energy_mc(const TangentFunction& u, const CoefficientField& Q,
                          const Spectrum& spectrum, const EigenBasis& basis,
                          std::size_t n_samples, std::uint64_t seed);
MCEstimate form_energy_mc(const CylindricalFunction& u, const CoefficientField& Q,
                          const Spectrum& spectrum, const EigenBasis& basis,
                          std::size_t n_samples, std::uint64_t seed);
MCEstimate form_energy_bilinear_mc(const TangentFunction& u, const TangentFunction& v,
                                   const CoefficientField& Q, const Spectrum& spectrum,
                                   const EigenBasis& basis, std::size_t n_samples,
                                   std::uint64_t seed);

/// |Du(mu)|^2_{L^2(mu)} for each measure, evaluated on the measure side.
std::vector<double> measure_energy_terms(const CylindricalFunction& u,
                                         std::span<const DiscreteMeasure> measures);

struct C1EnergyCheck {
  MCEstimate energy;
  double bound = 0.0;  // (uniform gradient bound)^2
  bool holds = false;
};

/// Identity-Q energy of u against C * (sup |Du|)^2 with 4 SE slack.
C1EnergyCheck c1_energy_check(const CylindricalFunction& u, const Spectrum& spectrum,
                              const EigenBasis& basis, double C, std::size_t n_samples,
                              std::uint64_t seed);

struct GalerkinOptions {
  std::size_t batches = 32;         // for the paired standard error
  double max_condition = 1e10;      // cap on the scaled mass-matrix condition number
  CoefficientField coefficient = CoefficientField::identity();
};

struct GalerkinComparison {
  std::vector<double> sigma;      // Ritz values on the big dictionary, ascending
  std::vector<double> lambda;     // Ritz values on the sub dictionary, ascending
  std::vector<double> std_error;  // SE of lambda_n - sigma_n (batch means)
  double condition_big = 0.0;
  double condition_sub = 0.0;
  bool holds = false;             // lambda_n >= sigma_n - 4 SE for n <= |sub|
};

/// Stiffness/mass Galerkin matrices of the tangent form over `big`, sharing
/// one Monte Carlo sample; the sub problem uses the principal submatrix at
/// `sub_indices`. Throws std::invalid_argument when a mass matrix is
/// rank-deficient beyond the condition cap.
GalerkinComparison galerkin_eig_compare(std::span<const TangentFunction> big,
                                        std::span<const std::size_t> sub_indices,
                                        const Spectrum& spectrum, const EigenBasis& basis,
                                        std::size_t n_samples, std::uint64_t seed,
                                        const GalerkinOptions& options = {});

/// Generalized symmetric eigenvalues of (K, M) after unit-mass scaling.
/// Throws if the scaled M has condition number above `max_condition`.
std::vector<double> ritz_values(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass,
                                double max_condition, double* condition = nullptr);

}  // namespace wasslab
