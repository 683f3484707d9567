#include "wasslab/measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wasslab/rng.hpp"

namespace wasslab {

DiscreteMeasure::DiscreteMeasure(PointCloud points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() != weights_.size()) {
    throw std::invalid_argument("measure needs one weight per atom");
  }
  if (points_.rows() == 0) throw std::invalid_argument("measure needs at least one atom");
  if (points_.cols() == 0) throw std::invalid_argument("measure dimension must be >= 1");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw std::invalid_argument("measure weights must be positive");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("measure weights must sum to 1, got " + std::to_string(total));
  }
  if (!points_.allFinite()) throw std::invalid_argument("measure atoms must be finite");
}

BaseMeasure make_base_measure(BaseKind kind, std::size_t N, std::size_t d, std::uint64_t seed) {
  if (N == 0) throw std::invalid_argument("base measure needs N >= 1 atoms");
  if (d == 0) throw std::invalid_argument("base measure needs d >= 1");
  const auto n = static_cast<Eigen::Index>(N);
  PointCloud points(n, static_cast<Eigen::Index>(d));
  switch (kind) {
    case BaseKind::uniform01:
      if (d != 1) throw std::invalid_argument("uniform01 base measure is one-dimensional");
      for (Eigen::Index i = 0; i < n; ++i) {
        points(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
      }
      break;
    case BaseKind::gaussian: {
      auto engine = rng::stream(seed, 0);
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] = normal(engine);
      break;
    }
    case BaseKind::custom:
      throw std::invalid_argument("custom base measures are built from explicit atoms");
  }
  return {kind, DiscreteMeasure(std::move(points),
                                Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(N)))};
}

double gram_tolerance(std::size_t modes, std::size_t atoms) {
  const double m = static_cast<double>(modes);
  const double n = static_cast<double>(atoms);
  return std::max(1e-9, 10.0 * m * m / (n * n));
}

EigenBasis::EigenBasis(DiscreteMeasure base, Eigen::MatrixXd values, Eigen::VectorXd anchor)
    : base_(std::move(base)), values_(std::move(values)), anchor_(std::move(anchor)) {
  if (base_.dim() != 1) throw std::invalid_argument("eigenbases are supported for d = 1 only");
  const auto n = static_cast<Eigen::Index>(base_.size());
  if (values_.rows() != n || anchor_.size() != n) {
    throw std::invalid_argument("basis values and anchor must have one row per atom");
  }
  gram_ = values_.transpose() * base_.weights().asDiagonal() * values_;
  gram_tol_ = gram_tolerance(modes(), atoms());
  if (modes() > 0) {
    if (gram_error() > gram_tol_) {
      throw std::invalid_argument("basis Gram matrix deviates from identity by " +
                                  std::to_string(gram_error()));
    }
    gram_factor_.compute(gram_);
  }
}

double EigenBasis::gram_error() const {
  if (modes() == 0) return 0.0;
  const auto id = Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols());
  return (gram_ - id).cwiseAbs().maxCoeff();
}

Eigen::VectorXd EigenBasis::synthesize(const Eigen::VectorXd& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != modes()) {
    throw std::invalid_argument("coefficient count does not match basis modes");
  }
  if (modes() == 0) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(atoms()));
  return values_ * coeffs;
}

Eigen::VectorXd EigenBasis::anchored(const Eigen::VectorXd& coeffs) const {
  return anchor_ + synthesize(coeffs);
}

Eigen::VectorXd EigenBasis::project(const Eigen::VectorXd& field) const {
  if (field.size() != static_cast<Eigen::Index>(atoms())) {
    throw std::invalid_argument("field must have one value per atom");
  }
  return values_.transpose() * base_.weights().cwiseProduct(field);
}

Eigen::VectorXd EigenBasis::coefficients(const Eigen::VectorXd& field) const {
  if (modes() == 0) return Eigen::VectorXd(0);
  return gram_factor_.solve(project(field));
}

EigenBasis eigenbasis_cosine(const BaseMeasure& base, std::size_t M) {
  if (base.kind != BaseKind::uniform01) {
    throw std::invalid_argument("cosine eigenbasis requires the uniform01 base measure");
  }
  const std::size_t N = base.measure.size();
  if (2 * M > N) {
    throw std::invalid_argument("cosine basis aliases: need M <= N/2 (M=" + std::to_string(M) +
                                ", N=" + std::to_string(N) + ")");
  }
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::MatrixXd values(n, static_cast<Eigen::Index>(M));
  const auto& x = base.measure.points();
  for (Eigen::Index m = 0; m < values.cols(); ++m) {
    for (Eigen::Index i = 0; i < n; ++i) {
      values(i, m) = m == 0 ? 1.0
                            : std::numbers::sqrt2 *
                                  std::cos(static_cast<double>(m) * std::numbers::pi * x(i, 0));
    }
  }
  Eigen::VectorXd anchor = x.col(0);
  return EigenBasis(base.measure, std::move(values), std::move(anchor));
}

TangentVector TangentVector::from_coeffs(Eigen::VectorXd coeffs) {
  TangentVector v;
  v.coeffs_ = std::move(coeffs);
  return v;
}

TangentVector TangentVector::from_field(Field field) {
  TangentVector v;
  v.field_ = std::move(field);
  return v;
}

Field TangentVector::field(const EigenBasis& basis) const {
  if (field_) return *field_;
  return as_field(basis.synthesize(*coeffs_));
}

const Field& TangentVector::field() const {
  if (!field_) throw std::logic_error("tangent vector is stored as coefficients");
  return *field_;
}

Eigen::VectorXd TangentVector::coeffs(const EigenBasis& basis) const {
  if (coeffs_) return *coeffs_;
  if (field_->cols() != 1) throw std::invalid_argument("coefficient form needs d = 1 fields");
  return basis.coefficients(field_->col(0));
}

const Eigen::VectorXd& TangentVector::coeffs() const {
  if (!coeffs_) throw std::logic_error("tangent vector is stored as raw field values");
  return *coeffs_;
}

TangentVector sample_gaussian_tangent(const Spectrum& spectrum, const EigenBasis& basis,
                                      std::uint64_t seed) {
  if (spectrum.size() != basis.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  auto engine = rng::stream(seed, 0);
  Eigen::VectorXd c;
  draw_gaussian_coeffs(spectrum, engine, c);
  return TangentVector::from_coeffs(std::move(c));
}

DiscreteMeasure pushforward(const DiscreteMeasure& base, const Field& phi) {
  if (static_cast<std::size_t>(phi.rows()) != base.size()) {
    throw std::invalid_argument("push-forward field must have one row per atom");
  }
  return DiscreteMeasure(phi, base.weights());
}

double tangent_norm(const DiscreteMeasure& base, const Field& phi, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("norm exponent must be in [1, inf)");
  if (static_cast<std::size_t>(phi.rows()) != base.size()) {
    throw std::invalid_argument("field must have one row per atom");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    acc += base.weights()[i] * std::pow(phi.row(i).norm(), p);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace wasslab
