#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wasslab/dirichlet.hpp"
#include "wasslab/parallel.hpp"
#include "wasslab/rng.hpp"

namespace wasslab {

namespace {

struct Accumulated {
  Eigen::MatrixXd K;
  Eigen::MatrixXd M;
  std::size_t count = 0;
};

Eigen::MatrixXd principal(const Eigen::MatrixXd& A, std::span<const std::size_t> idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      out(a, b) = A(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
    }
  }
  return out;
}

}  // namespace

std::vector<double> ritz_values(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass,
                                double max_condition, double* condition) {
  const auto n = mass.rows();
  if (stiffness.rows() != n || stiffness.cols() != n || mass.cols() != n) {
    throw std::invalid_argument("stiffness and mass must be square and of equal size");
  }
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(mass(i, i) > 0.0)) throw std::invalid_argument("dictionary element with zero mass");
    scale[i] = 1.0 / std::sqrt(mass(i, i));
  }
  const Eigen::MatrixXd Ms = scale.asDiagonal() * mass * scale.asDiagonal();
  const Eigen::MatrixXd Ks = scale.asDiagonal() * stiffness * scale.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mass_eig(Ms, Eigen::EigenvaluesOnly);
  const double lo = mass_eig.eigenvalues().minCoeff();
  const double hi = mass_eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (condition) *condition = cond;
  if (!(cond <= max_condition)) {
    throw std::invalid_argument("mass matrix is numerically rank-deficient (condition " +
                                std::to_string(cond) + ")");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (Ks + Ks.transpose()), 0.5 * (Ms + Ms.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("generalized eigensolve failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

GalerkinComparison galerkin_eig_compare(std::span<const TangentFunction> big,
                                        std::span<const std::size_t> sub_indices,
                                        const Spectrum& spectrum, const EigenBasis& basis,
                                        std::size_t n_samples, std::uint64_t seed,
                                        const GalerkinOptions& options) {
  if (big.empty()) throw std::invalid_argument("empty dictionary");
  if (sub_indices.empty()) throw std::invalid_argument("empty sub-dictionary");
  for (std::size_t k = 0; k < sub_indices.size(); ++k) {
    if (sub_indices[k] >= big.size()) throw std::invalid_argument("sub index out of range");
    for (std::size_t j = 0; j < k; ++j) {
      if (sub_indices[j] == sub_indices[k]) throw std::invalid_argument("repeated sub index");
    }
  }
  if (spectrum.size() != basis.modes()) {
    throw std::invalid_argument("spectrum and basis disagree on the number of modes");
  }
  const std::size_t batches = std::max<std::size_t>(2, options.batches);
  if (n_samples < batches) throw std::invalid_argument("fewer samples than batches");

  const auto D = static_cast<Eigen::Index>(big.size());
  std::vector<Accumulated> acc(batches);
  for_each_chunk(n_samples, batches, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Accumulated& a = acc[b];
    a.K = Eigen::MatrixXd::Zero(D, D);
    a.M = Eigen::MatrixXd::Zero(D, D);
    Eigen::VectorXd c;
    Eigen::VectorXd values(D);
    std::vector<Eigen::VectorXd> grads(big.size());
    for (std::size_t i = begin; i < end; ++i) {
      auto engine = rng::stream(seed, i);
      draw_gaussian_coeffs(spectrum, engine, c);
      const TangentState state(basis, c);
      for (Eigen::Index k = 0; k < D; ++k) {
        auto jet = big[static_cast<std::size_t>(k)].jet(state);
        values[k] = jet.value;
        grads[static_cast<std::size_t>(k)] = std::move(jet.gradient);
      }
      a.M.noalias() += values * values.transpose();
      for (Eigen::Index r = 0; r < D; ++r) {
        for (Eigen::Index s = r; s < D; ++s) {
          const double v = options.coefficient.pair(basis, grads[static_cast<std::size_t>(r)],
                                                    grads[static_cast<std::size_t>(s)]);
          a.K(r, s) += v;
          if (s != r) a.K(s, r) += v;
        }
      }
    }
    a.count = end - begin;
  });

  Eigen::MatrixXd K_total = Eigen::MatrixXd::Zero(D, D);
  Eigen::MatrixXd M_total = Eigen::MatrixXd::Zero(D, D);
  for (const auto& a : acc) {
    K_total += a.K;
    M_total += a.M;
  }
  const auto n = static_cast<double>(n_samples);

  GalerkinComparison out;
  const auto solve = [&](const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, double count,
                         double* cond_big, double* cond_sub, std::vector<double>& sigma,
                         std::vector<double>& lambda) {
    const Eigen::MatrixXd Kn = K / count;
    const Eigen::MatrixXd Mn = M / count;
    sigma = ritz_values(Kn, Mn, options.max_condition, cond_big);
    lambda = ritz_values(principal(Kn, sub_indices), principal(Mn, sub_indices),
                         options.max_condition, cond_sub);
  };
  solve(K_total, M_total, n, &out.condition_big, &out.condition_sub, out.sigma, out.lambda);

  // Delete-one-batch jackknife of lambda_n - sigma_n.
  const std::size_t m = sub_indices.size();
  std::vector<std::vector<double>> diffs(batches, std::vector<double>(m));
  for (std::size_t b = 0; b < batches; ++b) {
    std::vector<double> s, l;
    solve(K_total - acc[b].K, M_total - acc[b].M, n - static_cast<double>(acc[b].count),
          nullptr, nullptr, s, l);
    for (std::size_t k = 0; k < m; ++k) diffs[b][k] = l[k] - s[k];
  }
  out.std_error.assign(m, 0.0);
  out.holds = true;
  const double B = static_cast<double>(batches);
  for (std::size_t k = 0; k < m; ++k) {
    double mean = 0.0;
    for (std::size_t b = 0; b < batches; ++b) mean += diffs[b][k];
    mean /= B;
    double ss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) ss += (diffs[b][k] - mean) * (diffs[b][k] - mean);
    out.std_error[k] = std::sqrt((B - 1.0) / B * ss);
    if (out.lambda[k] < out.sigma[k] - 4.0 * out.std_error[k]) out.holds = false;
  }
  return out;
}

}  // namespace wasslab
