#pragma once

#include <functional>
#include <memory>
#include <string>

#include "wasslab/calculus.hpp"
#include "wasslab/measure.hpp"

namespace wasslab {

/// A point phi = anchor + sum_n c_n phi_n of the tangent space together with
/// its image Psi(phi). The basis must outlive the state.
class TangentState {
 public:
  TangentState(const EigenBasis& basis, Eigen::VectorXd coeffs);

  const EigenBasis& basis() const { return *basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  // Values of phi at the atoms of mu_0.
  const Eigen::VectorXd& field() const { return field_; }
  // Psi(phi) = mu_0 o phi^{-1}; atom i is phi(x_i).
  const DiscreteMeasure& pushed() const { return pushed_; }

 private:
  const EigenBasis* basis_;
  Eigen::VectorXd coeffs_;
  Eigen::VectorXd field_;
  DiscreteMeasure pushed_;
};

/// A C^1 function F on T_0 with its T_0-gradient, represented on the atoms
/// of mu_0. Pull-backs u o Psi use the closed-form chain rule
/// grad(u o Psi)(phi) = Du(Psi(phi)) o phi.
class TangentFunction {
 public:
  struct Jet {
    double value = 0.0;
    Eigen::VectorXd gradient;  // element of T_0 on the atoms
  };

  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Jet jet(const TangentState& state) const = 0;
    // d/dc_n F, the derivative along the basis vector phi_n.
    virtual Eigen::VectorXd partials(const TangentState& state, const Jet& jet) const;
  };

  static TangentFunction pullback(CylindricalFunction u);
  /// F(phi) = c_n.
  static TangentFunction coefficient(std::size_t mode_index);
  /// F(phi) = h(c_n) for a scalar map h with derivative dh.
  static TangentFunction coefficient_map(std::string name, std::size_t mode_index,
                                         std::function<double(double)> h,
                                         std::function<double(double)> dh);
  /// F(phi) = normalized Hermite eigenfunction of degree k in c_n.
  static TangentFunction hermite(std::size_t mode_index, int degree, double alpha);
  static TangentFunction constant(double c);

  friend TangentFunction operator+(const TangentFunction& a, const TangentFunction& b);

  const std::string& name() const { return name_; }
  bool is_pullback() const { return pullback_; }

  Jet jet(const TangentState& state) const { return impl_->jet(state); }
  double value(const TangentState& state) const { return impl_->jet(state).value; }
  Eigen::VectorXd gradient(const TangentState& state) const { return impl_->jet(state).gradient; }
  /// All coordinate derivatives d/dc_n F, n < basis.modes().
  Eigen::VectorXd partials(const TangentState& state) const;
  Eigen::VectorXd partials(const TangentState& state, const Jet& jet) const {
    return impl_->partials(state, jet);
  }

 private:
  TangentFunction(std::string name, bool pullback, std::shared_ptr<const Impl> impl)
      : name_(std::move(name)), pullback_(pullback), impl_(std::move(impl)) {}

  std::string name_;
  bool pullback_ = false;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace wasslab
