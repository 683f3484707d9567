#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "wasslab/spectral.hpp"

namespace wasslab {

/// Row-major N x d array: row i is the value at atom i.
using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// A vector field evaluated on the support of the base measure (N x d).
using Field = PointCloud;

/// Probability measure with finitely many atoms in R^d. Immutable.
///
/// Coincident atoms are kept as separate rows; nothing downstream merges
/// them.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Throws std::invalid_argument unless weights are positive, sum to 1
  /// (within 1e-9) and match the number of rows of `points`.
  DiscreteMeasure(PointCloud points, Eigen::VectorXd weights);

  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  const PointCloud& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim(), dim()};
  }

 private:
  PointCloud points_;
  Eigen::VectorXd weights_;
};

enum class BaseKind { uniform01, gaussian, custom };

/// The reference measure mu_0 together with how it was discretized.
struct BaseMeasure {
  BaseKind kind = BaseKind::custom;
  DiscreteMeasure measure;
};

/// uniform01: midpoints (i - 1/2)/N, d must be 1. gaussian: N iid standard
/// normal points in R^d drawn from `seed`. Weights are 1/N.
BaseMeasure make_base_measure(BaseKind kind, std::size_t N, std::size_t d = 1,
                              std::uint64_t seed = 0);

/// max(1e-9, 10 M^2 / N^2).
double gram_tolerance(std::size_t modes, std::size_t atoms);

/// Orthonormal system phi_1..phi_M in L^2(mu_0) sampled on the atoms of a
/// one-dimensional base measure, plus the anchor field the process state is
/// built around (identity unless the basis was transported).
class EigenBasis {
 public:
  /// Validates the discrete Gram matrix against gram_tolerance(M, N).
  EigenBasis(DiscreteMeasure base, Eigen::MatrixXd values, Eigen::VectorXd anchor);

  const DiscreteMeasure& base() const { return base_; }
  std::size_t modes() const { return static_cast<std::size_t>(values_.cols()); }
  std::size_t atoms() const { return base_.size(); }
  // N x M; column n holds phi_{n+1} at the atoms.
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::VectorXd& anchor() const { return anchor_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  double gram_tol() const { return gram_tol_; }
  double gram_error() const;

  /// sum_n c_n phi_n at the atoms.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;
  /// anchor + sum_n c_n phi_n at the atoms: the process state for `coeffs`.
  Eigen::VectorXd anchored(const Eigen::VectorXd& coeffs) const;
  /// <phi_n, field>_{L^2(mu_0)} for every n, without Gram correction.
  Eigen::VectorXd project(const Eigen::VectorXd& field) const;
  /// Coefficients c solving Gram c = project(field).
  Eigen::VectorXd coefficients(const Eigen::VectorXd& field) const;

 private:
  DiscreteMeasure base_;
  Eigen::MatrixXd values_;
  Eigen::VectorXd anchor_;
  Eigen::MatrixXd gram_;
  Eigen::LDLT<Eigen::MatrixXd> gram_factor_;
  double gram_tol_ = 0.0;
};

/// phi_1 = 1, phi_n(x) = sqrt(2) cos((n-1) pi x). Requires a uniform01 base
/// and M <= N/2.
EigenBasis eigenbasis_cosine(const BaseMeasure& base, std::size_t M);

/// Element of T_0 = L^p(mu_0): eigenbasis coefficients or raw values.
class TangentVector {
 public:
  static TangentVector from_coeffs(Eigen::VectorXd coeffs);
  static TangentVector from_field(Field field);

  bool has_coeffs() const { return coeffs_.has_value(); }
  /// Raw values on the atoms (N x d). Coefficient form needs a basis.
  Field field(const EigenBasis& basis) const;
  const Field& field() const;
  Eigen::VectorXd coeffs(const EigenBasis& basis) const;
  const Eigen::VectorXd& coeffs() const;

 private:
  std::optional<Eigen::VectorXd> coeffs_;
  std::optional<Field> field_;
};

/// Coefficients c_n ~ N(0, 1/alpha_n) independently; deterministic in seed.
TangentVector sample_gaussian_tangent(const Spectrum& spectrum, const EigenBasis& basis,
                                      std::uint64_t seed);

/// Writes N(0, 1/alpha_n) draws into `out` from `engine`.
template <typename Engine>
void draw_gaussian_coeffs(const Spectrum& spectrum, Engine& engine, Eigen::VectorXd& out);

/// mu_0 o phi^{-1}: atoms phi(x_i) carrying the weights of mu_0.
DiscreteMeasure pushforward(const DiscreteMeasure& base, const Field& phi);

/// (sum_i w_i |phi(x_i)|^p)^{1/p}, p >= 1.
double tangent_norm(const DiscreteMeasure& base, const Field& phi, double p);

/// Field view of a scalar per-atom vector (d = 1).
inline Field as_field(const Eigen::VectorXd& v) { return Field(v); }

/// CSV with header x_1,...,x_d,weight; 17 significant digits.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure);
void write_measure_csv(const std::string& path, const DiscreteMeasure& measure);
/// Throws IoError on malformed content.
DiscreteMeasure read_measure_csv(std::istream& in);
DiscreteMeasure read_measure_csv(const std::string& path);

// ---------------------------------------------------------------------------

template <typename Engine>
void draw_gaussian_coeffs(const Spectrum& spectrum, Engine& engine, Eigen::VectorXd& out) {
  std::normal_distribution<double> normal;
  out.resize(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    out[static_cast<Eigen::Index>(n)] = normal(engine) / std::sqrt(spectrum.alpha(n));
  }
}

}  // namespace wasslab
