#include "wasslab/tangent.hpp"

#include <stdexcept>

#include "wasslab/spectral.hpp"

namespace wasslab {
namespace {

class Pullback final : public TangentFunction::Impl {
 public:
  explicit Pullback(CylindricalFunction u) : u_(std::move(u)) {}

  TangentFunction::Jet jet(const TangentState& state) const override {
    const auto& mu = state.pushed();
    if (mu.dim() != 1) throw std::invalid_argument("tangent functions need d = 1");
    TangentFunction::Jet out;
    out.value = u_(mu);
    out.gradient = u_.derivative_at_atoms(mu).col(0);
    return out;
  }

 private:
  CylindricalFunction u_;
};

class CoefficientMap final : public TangentFunction::Impl {
 public:
  CoefficientMap(std::size_t mode, std::function<double(double)> h,
                 std::function<double(double)> dh)
      : mode_(mode), h_(std::move(h)), dh_(std::move(dh)) {}

  TangentFunction::Jet jet(const TangentState& state) const override {
    check(state);
    const double c = state.coeffs()[static_cast<Eigen::Index>(mode_)];
    TangentFunction::Jet out;
    out.value = h_(c);
    out.gradient = dh_(c) * state.basis().values().col(static_cast<Eigen::Index>(mode_));
    return out;
  }

  Eigen::VectorXd partials(const TangentState& state, const TangentFunction::Jet&) const override {
    check(state);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(state.basis().modes()));
    out[static_cast<Eigen::Index>(mode_)] = dh_(state.coeffs()[static_cast<Eigen::Index>(mode_)]);
    return out;
  }

 private:
  void check(const TangentState& state) const {
    if (mode_ >= state.basis().modes()) {
      throw std::invalid_argument("coefficient function refers to a mode beyond the basis");
    }
  }

  std::size_t mode_;
  std::function<double(double)> h_;
  std::function<double(double)> dh_;
};

class Constant final : public TangentFunction::Impl {
 public:
  explicit Constant(double c) : c_(c) {}
  TangentFunction::Jet jet(const TangentState& state) const override {
    return {c_, Eigen::VectorXd::Zero(state.field().size())};
  }

 private:
  double c_;
};

class Sum final : public TangentFunction::Impl {
 public:
  Sum(TangentFunction a, TangentFunction b) : a_(std::move(a)), b_(std::move(b)) {}

  TangentFunction::Jet jet(const TangentState& state) const override {
    auto ja = a_.jet(state);
    const auto jb = b_.jet(state);
    ja.value += jb.value;
    ja.gradient += jb.gradient;
    return ja;
  }

  Eigen::VectorXd partials(const TangentState& state, const TangentFunction::Jet&) const override {
    return a_.partials(state) + b_.partials(state);
  }

 private:
  TangentFunction a_;
  TangentFunction b_;
};

}  // namespace

TangentState::TangentState(const EigenBasis& basis, Eigen::VectorXd coeffs)
    : basis_(&basis), coeffs_(std::move(coeffs)) {
  field_ = basis.anchored(coeffs_);
  pushed_ = DiscreteMeasure(PointCloud(field_), basis.base().weights());
}

// Exact derivative of eps -> F(phi + eps phi_n) for gradient-represented
// functions: <grad F, phi_n> in the discrete L^2(mu_0).
Eigen::VectorXd TangentFunction::Impl::partials(const TangentState& state,
                                                const Jet& jet) const {
  const auto& basis = state.basis();
  return basis.values().transpose() * basis.base().weights().cwiseProduct(jet.gradient);
}

Eigen::VectorXd TangentFunction::partials(const TangentState& state) const {
  return impl_->partials(state, impl_->jet(state));
}

TangentFunction TangentFunction::pullback(CylindricalFunction u) {
  std::string name = u.name() + " o Psi";
  return {std::move(name), true, std::make_shared<Pullback>(std::move(u))};
}

TangentFunction TangentFunction::coefficient(std::size_t mode_index) {
  return coefficient_map("c_" + std::to_string(mode_index + 1), mode_index,
                         [](double c) { return c; }, [](double) { return 1.0; });
}

TangentFunction TangentFunction::coefficient_map(std::string name, std::size_t mode_index,
                                                 std::function<double(double)> h,
                                                 std::function<double(double)> dh) {
  return {std::move(name), false,
          std::make_shared<CoefficientMap>(mode_index, std::move(h), std::move(dh))};
}

TangentFunction TangentFunction::hermite(std::size_t mode_index, int degree, double alpha) {
  if (degree < 0) throw std::invalid_argument("Hermite degree must be non-negative");
  return coefficient_map(
      "H" + std::to_string(degree) + "(c_" + std::to_string(mode_index + 1) + ")", mode_index,
      [degree, alpha](double c) { return hermite_eigenfunction(degree, alpha, c); },
      [degree, alpha](double c) { return hermite_eigenfunction_derivative(degree, alpha, c); });
}

TangentFunction TangentFunction::constant(double c) {
  return {"const", false, std::make_shared<Constant>(c)};
}

TangentFunction operator+(const TangentFunction& a, const TangentFunction& b) {
  return {a.name() + " + " + b.name(), a.is_pullback() && b.is_pullback(),
          std::make_shared<Sum>(a, b)};
}

}  // namespace wasslab
