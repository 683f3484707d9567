#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wasslab/ou_sim.hpp"
#include "wasslab/rng.hpp"

using namespace wasslab;

namespace {

struct Setup : ::testing::Test {
  BaseMeasure base = make_base_measure(BaseKind::uniform01, 32);
  EigenBasis basis = eigenbasis_cosine(base, 3);
  Spectrum spectrum = make_spectrum(PowerLaw{1.0, 2.0}, 3);
};

}  // namespace

TEST_F(Setup, SingleTimeReturnsInit) {
  const Eigen::Vector3d c0(0.1, -0.2, 0.3);
  const auto path = simulate_path(spectrum, {0.0}, Eigen::VectorXd(c0), 1);
  ASSERT_EQ(path.states().size(), 1u);
  EXPECT_TRUE(path.state(0) == Eigen::VectorXd(c0));
}

TEST_F(Setup, GridValidation) {
  EXPECT_THROW(simulate_path(spectrum, {0.0, 0.5, 0.5}, StationaryInit{}, 1), std::invalid_argument);
  EXPECT_THROW(simulate_path(spectrum, {0.0, 0.5, 0.2}, StationaryInit{}, 1), std::invalid_argument);
  EXPECT_THROW(simulate_path(spectrum, {-0.1, 0.5}, StationaryInit{}, 1), std::invalid_argument);
  EXPECT_THROW(simulate_path(spectrum, {}, StationaryInit{}, 1), std::invalid_argument);
  EXPECT_THROW(simulate_path(spectrum, {0.0}, Eigen::VectorXd(Eigen::Vector2d(0, 0)), 1),
               std::invalid_argument);
}

TEST_F(Setup, Deterministic) {
  const std::vector<double> grid = {0.0, 0.1, 0.5, 2.0};
  const auto a = simulate_path(spectrum, grid, StationaryInit{}, 42);
  const auto b = simulate_path(spectrum, grid, StationaryInit{}, 42);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_TRUE(a.state(k) == b.state(k));
  const auto c = simulate_path(spectrum, grid, StationaryInit{}, 43);
  EXPECT_FALSE(a.state(3) == c.state(3));
}

TEST_F(Setup, StationaryMarginalVariances) {
  const std::vector<double> grid = {0.0, 0.05, 0.7, 3.0};
  const std::size_t n = 10'000;
  std::vector<std::vector<std::vector<double>>> v(grid.size(), std::vector<std::vector<double>>(3));
  for (std::size_t p = 0; p < n; ++p) {
    const auto path = simulate_path(spectrum, grid, StationaryInit{}, 5, p);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (int m = 0; m < 3; ++m) v[k][m].push_back(path.state(k)[m]);
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t m = 0; m < 3; ++m) {
      const auto [var, se] = oracle::variance_with_se(v[k][m]);
      EXPECT_LE(std::abs(var - 1.0 / spectrum.alpha(m)), 4.0 * se) << k << " " << m;
    }
  }
}

TEST_F(Setup, PushedSnapshotIsExact) {
  const auto path = simulate_path(spectrum, {0.0, 1.0}, StationaryInit{}, 3);
  const auto mu = path.pushed(1, basis);
  const Eigen::VectorXd expected = base.measure.points().col(0) + basis.values() * path.state(1);
  EXPECT_TRUE(mu.points().col(0) == expected);
  EXPECT_TRUE(mu.weights() == base.measure.weights());
}

TEST_F(Setup, CoarseAndFineGridsAgreeUnderAggregatedNoise) {
  // Two steps of size t/2 with noises z1, z2 equal one step of size t with
  // the aggregated noise (e^{-a t/2} s z1 + s z2) / S.
  const double a = 2.0, t = 0.8, x0 = 0.7;
  std::mt19937_64 g(3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 100; ++i) {
    const double z1 = N(g), z2 = N(g);
    const auto half = ou_transition_moments(a, t / 2), full = ou_transition_moments(a, t);
    const double fine = ou_transition(a, t / 2, ou_transition(a, t / 2, x0, z1), z2);
    const double z = (half.mean_factor * std::sqrt(half.variance) * z1 + std::sqrt(half.variance) * z2) /
                     std::sqrt(full.variance);
    EXPECT_NEAR(fine, ou_transition(a, t, x0, z), 1e-12);
  }
}

TEST_F(Setup, StationaryLawIsTimeInvariant) {
  const std::size_t n = 5000;
  const auto f = catalogue::function("mean");
  std::vector<double> a, b;
  for (std::size_t p = 0; p < n; ++p) {
    const auto path = simulate_path(spectrum, {0.0, 2.0}, StationaryInit{}, 8, p);
    a.push_back(f(path.pushed(0, basis)));
  }
  for (std::size_t p = 0; p < n; ++p) {
    const auto path = simulate_path(spectrum, {0.0, 2.0}, StationaryInit{}, 9, p);
    b.push_back(f(path.pushed(1, basis)));
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST_F(Setup, PathCsv) {
  const auto path = simulate_path(spectrum, {0.0, 0.5}, Eigen::VectorXd(Eigen::Vector3d(1, 2, 3)), 1);
  std::ostringstream out;
  write_path_csv(out, path);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,mode,coeff");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST_F(Setup, InvariantZeroModesIsBase) {
  const auto B0 = eigenbasis_cosine(base, 0);
  const auto draws = sample_invariant(spectrum.leading(0), B0, 5, 1);
  for (const auto& m : draws) EXPECT_TRUE(m.points() == base.measure.points());
  EXPECT_THROW(sample_invariant(spectrum, basis, 0, 1), std::invalid_argument);
}

TEST_F(Setup, InvariantMeanMatchesAnchoredMean) {
  const std::size_t n = 20'000;
  const auto draws = sample_invariant(spectrum, basis, n, 3);
  std::vector<double> v;
  for (const auto& m : draws) v.push_back(catalogue::function("mean")(m));
  const auto [var, se] = oracle::variance_with_se(v);
  (void)se;
  EXPECT_LE(std::abs(oracle::mean(v) - 0.5), 4.0 * std::sqrt(var / n));
}

TEST_F(Setup, InvariantSeedsAgreeInLaw) {
  const auto f = catalogue::function("tanh(x2)");
  std::vector<double> a, b;
  for (const auto& m : sample_invariant(spectrum, basis, 4000, 1)) a.push_back(f(m));
  for (const auto& m : sample_invariant(spectrum, basis, 4000, 2)) b.push_back(f(m));
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST_F(Setup, SemigroupExamples) {
  const auto s1 = make_spectrum(PowerLaw{1.0, 2.0}, 2);
  const auto k0 = semigroup_eigen_check(0, s1, 0, 0.3, 1.2, 100, 1);
  EXPECT_EQ(k0.lhs.value, 1.0);
  EXPECT_EQ(k0.rhs, 1.0);
  EXPECT_TRUE(k0.holds);
  const auto k1 = semigroup_eigen_check(1, s1, 0, std::log(2.0), 2.0, 100'000, 2);
  EXPECT_NEAR(k1.rhs, 0.5 * hermite_eigenfunction(1, 1.0, 2.0), 1e-15);
  EXPECT_TRUE(k1.holds);
  const auto k2 = semigroup_eigen_check_stationary(2, s1, 1, 0.5, 100'000, 3);
  EXPECT_EQ(k2.rhs, 0.0);
  EXPECT_TRUE(k2.holds);
  EXPECT_THROW(semigroup_eigen_check(7, s1, 0, 1.0, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(semigroup_eigen_check(1, s1, 0, 0.0, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(semigroup_eigen_check(1, s1, 2, 1.0, 0.0, 10, 1), std::invalid_argument);
}

TEST_F(Setup, GeneratorResidual) {
  std::vector<double> x0(100'000);
  std::mt19937_64 g(4);
  std::normal_distribution<double> N;
  for (auto& x : x0) x = N(g);
  const auto r0 = generator_residual(0, spectrum, 0, 0.3, x0, 1);
  EXPECT_EQ(r0.value, 0.0);
  EXPECT_EQ(r0.std_error, 0.0);
  const auto rt0 = generator_residual(3, spectrum, 1, 0.0, x0, 1);
  EXPECT_EQ(rt0.value, 0.0);
  const auto r1 = generator_residual(1, spectrum, 0, 0.3, x0, 2);
  EXPECT_LE(std::abs(r1.value), 4.0 * r1.std_error);
}

TEST_F(Setup, IbpLinearCase) {
  const auto r = ibp_check(TangentFunction::coefficient(1), TangentFunction::constant(1.0), 1,
                           spectrum, basis, 100'000, 7);
  EXPECT_EQ(r.lhs.value, 1.0);
  EXPECT_LE(std::abs(r.rhs.value - 1.0), 4.0 * r.rhs.std_error);
  EXPECT_TRUE(r.holds);
}

TEST_F(Setup, IbpConstantU) {
  const auto r = ibp_check(TangentFunction::constant(2.0), TangentFunction::pullback(catalogue::function("tanh_mean")),
                           0, spectrum, basis, 20'000, 8);
  EXPECT_EQ(r.lhs.value, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST_F(Setup, IbpPullbacksAcrossModes) {
  const std::vector<std::string> names = {"tanh_mean", "sin_second_moment", "atan(cos_pi)"};
  for (const auto& un : names) {
    for (const auto& vn : names) {
      for (std::size_t mode : {0u, 1u, 2u}) {
        const auto r = ibp_check(catalogue::function(un), catalogue::function(vn), mode, spectrum,
                                 basis, 20'000, 100 + mode);
        EXPECT_TRUE(r.holds) << un << " " << vn << " " << mode << " diff " << r.difference.value
                             << " se " << r.difference.std_error;
      }
    }
  }
}

TEST_F(Setup, IbpMatchesGaussHermiteQuadrature) {
  // u = v = tanh(mu(x)) on a two-mode basis: mu(x) = 1/2 + c_1 <phi_1, 1> + c_2 <phi_2, 1> collapses
  // to 1/2 + c_1 (phi_2 averages to ~0), so E[d_2 u v] can be integrated on the (c_1, c_2) plane.
  const auto b2 = eigenbasis_cosine(base, 2);
  const auto s2 = make_spectrum(PowerLaw{1.0, 2.0}, 2);
  const auto u = TangentFunction::pullback(catalogue::function("tanh_mean"));
  const auto rule = oracle::gauss_hermite(40);
  double quad = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      Eigen::Vector2d c(rule.nodes[i] / std::sqrt(s2.alpha(0)), rule.nodes[j] / std::sqrt(s2.alpha(1)));
      const TangentState st(b2, c);
      const auto jet = u.jet(st);
      quad += rule.weights[i] * rule.weights[j] * u.partials(st, jet)[1] * jet.value;
    }
  }
  const auto r = ibp_check(u, u, 1, s2, b2, 100'000, 11);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(std::abs(r.lhs.value - quad), 4.0 * r.lhs.std_error + 1e-12);
  EXPECT_LE(std::abs(r.rhs.value - quad), 4.0 * r.rhs.std_error + 1e-12);
}

TEST_F(Setup, InvarianceIdentityTransport) {
  const std::vector<CylindricalFunction> fs = {catalogue::function("mean")};
  const auto r = reference_invariance_check(basis, base.measure, base.measure.points().col(0),
                                            spectrum, fs, 2000, 1);
  EXPECT_TRUE(r.holds);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].functional, "mean");
}

TEST_F(Setup, InvarianceDoublingMap) {
  const Eigen::VectorXd T = 2.0 * base.measure.points().col(0);
  const auto base_b = pushforward(base.measure, as_field(T));
  const std::vector<CylindricalFunction> fs = {catalogue::function("mean"),
                                               catalogue::function("second_moment"),
                                               catalogue::function("tanh(x2)")};
  const auto r = reference_invariance_check(basis, base_b, T, spectrum, fs, 5000, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.rows.size(), 3u);
  const auto Bb = transport_basis(basis, base_b, T);
  EXPECT_LE(Bb.gram_error(), basis.gram_error() + 1e-15);
}

TEST_F(Setup, InvarianceRejectsBadTransport) {
  const std::vector<CylindricalFunction> fs = {catalogue::function("mean")};
  const Eigen::VectorXd T = 2.0 * base.measure.points().col(0);
  // base_b is not the image of base_a.
  EXPECT_THROW(reference_invariance_check(basis, base.measure, T, spectrum, fs, 100, 1),
               std::invalid_argument);
  // collision: constant map
  const Eigen::VectorXd C = Eigen::VectorXd::Constant(32, 0.5);
  EXPECT_THROW(reference_invariance_check(basis, pushforward(base.measure, as_field(C)), C, spectrum,
                                          fs, 100, 1),
               std::invalid_argument);
}
