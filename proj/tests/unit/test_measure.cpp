#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wasslab/error.hpp"
#include "wasslab/measure.hpp"
#include "wasslab/spectral.hpp"
#include "wasslab/wasserstein.hpp"

using namespace wasslab;

TEST(BaseMeasure, UniformMidpoints) {
  const auto b = make_base_measure(BaseKind::uniform01, 4);
  ASSERT_EQ(b.measure.size(), 4u);
  const double expected[] = {0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(b.measure.point(i)[0], expected[i]);
    EXPECT_DOUBLE_EQ(b.measure.weight(i), 0.25);
  }
}

TEST(BaseMeasure, GaussianMeanCLT) {
  const std::size_t N = 10'000;
  const auto b = make_base_measure(BaseKind::gaussian, N, 1, 99);
  EXPECT_LE(std::abs(b.measure.points().mean()), 4.0 / std::sqrt(double(N)));
}

TEST(BaseMeasure, Deterministic) {
  const auto a = make_base_measure(BaseKind::gaussian, 50, 3, 7);
  const auto b = make_base_measure(BaseKind::gaussian, 50, 3, 7);
  EXPECT_TRUE(a.measure.points() == b.measure.points());
  const auto c = make_base_measure(BaseKind::gaussian, 50, 3, 8);
  EXPECT_FALSE(a.measure.points() == c.measure.points());
}

TEST(BaseMeasure, Rejections) {
  EXPECT_THROW(make_base_measure(BaseKind::uniform01, 0), std::invalid_argument);
  EXPECT_THROW(make_base_measure(BaseKind::uniform01, 4, 2), std::invalid_argument);
}

TEST(DiscreteMeasure, Validation) {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  EXPECT_THROW(DiscreteMeasure(PointCloud(x), Eigen::Vector2d(0.5, 0.6)), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure(PointCloud(x), Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
  EXPECT_NO_THROW(DiscreteMeasure(PointCloud(x), Eigen::Vector2d(0.5, 0.5)));
}

TEST(CosineBasis, SingleMode) {
  const auto base = make_base_measure(BaseKind::uniform01, 10);
  const auto B = eigenbasis_cosine(base, 1);
  EXPECT_TRUE((B.values().array() == 1.0).all());
  EXPECT_NEAR(B.gram()(0, 0), 1.0, 1e-15);
}

TEST(CosineBasis, GramErrorSmall) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 200), 3);
  EXPECT_LE(B.gram_error(), 1e-3);
  EXPECT_LE(B.gram_error(), gram_tolerance(3, 200));
}

TEST(CosineBasis, ProjectionOnIdentity) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 10'000), 2);
  const Eigen::VectorXd proj = B.project(B.base().points().col(0));
  EXPECT_NEAR(proj[1], -2.0 * std::numbers::sqrt2 / (std::numbers::pi * std::numbers::pi), 1e-6);
  EXPECT_NEAR(proj[1], -0.28658, 1e-5);
}

TEST(CosineBasis, Rejections) {
  EXPECT_THROW(eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 10), 6),
               std::invalid_argument);
  EXPECT_THROW(eigenbasis_cosine(make_base_measure(BaseKind::gaussian, 10), 2),
               std::invalid_argument);
}

TEST(EigenBasis, RejectsNonOrthonormalValues) {
  const auto base = make_base_measure(BaseKind::uniform01, 8);
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(8, 2, 1.0);
  EXPECT_THROW(EigenBasis(base.measure, v, base.measure.points().col(0)), std::invalid_argument);
}

TEST(EigenBasis, RoundTrip) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 400), 12);
  std::mt19937_64 g(3);
  std::normal_distribution<double> N;
  Eigen::VectorXd c(12);
  for (auto& x : c) x = N(g);
  const Eigen::VectorXd raw = B.synthesize(c);
  const auto tv = TangentVector::from_field(as_field(raw));
  const Eigen::VectorXd back = B.synthesize(tv.coeffs(B));
  EXPECT_LE((back - raw).cwiseAbs().maxCoeff(), B.gram_tol() * raw.norm());
  EXPECT_LE((tv.coeffs(B) - c).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GaussianTangent, ZeroModes) {
  const auto base = make_base_measure(BaseKind::uniform01, 10);
  const auto B = eigenbasis_cosine(base, 0);
  const auto S = make_spectrum(PowerLaw{}, 3).leading(0);
  const auto v = sample_gaussian_tangent(S, B, 1);
  EXPECT_EQ(v.coeffs().size(), 0);
  EXPECT_TRUE((v.field(B).array() == 0.0).all());
}

TEST(GaussianTangent, ModeMismatch) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 10), 2);
  EXPECT_THROW(sample_gaussian_tangent(make_spectrum(PowerLaw{}, 3), B, 1), std::invalid_argument);
}

TEST(GaussianTangent, Deterministic) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 20), 4);
  const auto S = make_spectrum(PowerLaw{}, 4);
  EXPECT_TRUE(sample_gaussian_tangent(S, B, 5).coeffs() == sample_gaussian_tangent(S, B, 5).coeffs());
}

TEST(GaussianTangent, MomentsMonteCarlo) {
  const auto B = eigenbasis_cosine(make_base_measure(BaseKind::uniform01, 20), 3);
  const auto S = make_spectrum(PowerLaw{1.0, 2.0}, 3);
  const std::size_t n = 100'000;
  std::vector<double> c2(n), c12(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = sample_gaussian_tangent(S, B, 1000 + i).coeffs();
    c2[i] = c[1];
    c12[i] = c[0] * c[1];
  }
  const auto [var, se] = oracle::variance_with_se(c2);
  EXPECT_LE(std::abs(var - 0.25), 4.0 * se);
  const auto [v12, unused] = oracle::variance_with_se(c12);
  (void)unused;
  EXPECT_LE(std::abs(oracle::mean(c12)), 4.0 * std::sqrt(v12 / n));
}

TEST(Pushforward, IdentityAndConstant) {
  const auto base = make_base_measure(BaseKind::uniform01, 16).measure;
  const auto id = pushforward(base, base.points());
  EXPECT_TRUE(id.points() == base.points());
  EXPECT_TRUE(id.weights() == base.weights());
  const auto c = pushforward(base, Field::Constant(16, 1, 0.3));
  EXPECT_TRUE((c.points().array() == 0.3).all());
}

TEST(Pushforward, AffineImageCdf) {
  const auto base = make_base_measure(BaseKind::uniform01, 100).measure;
  const auto img = pushforward(base, as_field(2.0 * base.points().col(0)));
  double cdf = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    cdf += img.weight(i);
    // the i-th atom sits at 2(i + 1/2)/N; the uniform[0,2] CDF there is (i + 1/2)/N
    EXPECT_NEAR(img.point(i)[0] / 2.0, (i + 0.5) / 100.0, 1e-12);
    EXPECT_NEAR(cdf, (i + 1.0) / 100.0, 1e-12);
  }
}

TEST(Pushforward, PreservesMassAndMoments) {
  const auto base = make_base_measure(BaseKind::gaussian, 60, 2, 4).measure;
  std::mt19937_64 g(1);
  std::normal_distribution<double> N;
  Field phi(60, 2);
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = N(g);
  const auto img = pushforward(base, phi);
  EXPECT_NEAR(img.weights().sum(), 1.0, 1e-15);
  for (double p : {1.0, 2.0, 3.5}) {
    double m = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      m += img.weight(i) * std::pow(std::hypot(img.point(i)[0], img.point(i)[1]), p);
    }
    EXPECT_NEAR(std::pow(m, 1.0 / p), tangent_norm(base, phi, p), 1e-12);
  }
}

TEST(TangentNorm, Examples) {
  const auto base = make_base_measure(BaseKind::uniform01, 10'000).measure;
  EXPECT_EQ(tangent_norm(base, Field::Zero(10'000, 1), 2.0), 0.0);
  for (double p : {1.0, 2.0, 7.0}) {
    EXPECT_NEAR(tangent_norm(base, Field::Constant(10'000, 1, -1.5), p), 1.5, 1e-12);
  }
  EXPECT_NEAR(tangent_norm(base, base.points(), 2.0), 1.0 / std::sqrt(3.0), 1e-4);
  EXPECT_THROW(tangent_norm(base, base.points(), 0.5), std::invalid_argument);
}

TEST(PsiContraction, RandomPairs) {
  const auto base = make_base_measure(BaseKind::uniform01, 200).measure;
  std::mt19937_64 g(17);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 100; ++trial) {
    Field a(200, 1), b(200, 1);
    for (Eigen::Index i = 0; i < 200; ++i) {
      a(i, 0) = N(g);
      b(i, 0) = N(g);
    }
    for (double p : {1.0, 2.0}) {
      const double w = w1d(pushforward(base, a), pushforward(base, b), p).distance;
      EXPECT_LE(w, tangent_norm(base, a - b, p) + 1e-12);
    }
  }
}

TEST(PsiContraction, MonotonePairsAreSharp) {
  const auto base = make_base_measure(BaseKind::uniform01, 200).measure;
  std::mt19937_64 g(18);
  std::normal_distribution<double> N;
  for (int k = 0; k < 100; ++k) {
    Field a(200, 1), b(200, 1);
    for (Eigen::Index i = 0; i < 200; ++i) {
      a(i, 0) = N(g);
      b(i, 0) = 3.0 * N(g);
    }
    std::sort(a.data(), a.data() + 200);
    std::sort(b.data(), b.data() + 200);
    for (double p : {1.0, 2.0}) {
      EXPECT_NEAR(w1d(pushforward(base, a), pushforward(base, b), p).distance,
                  tangent_norm(base, a - b, p), 1e-10);
    }
  }
}

TEST(MeasureCsv, RoundTripBitExact) {
  std::mt19937_64 g(8);
  const auto mu = oracle::random_measure(g, 7, 3);
  std::stringstream ss;
  write_measure_csv(ss, mu);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "x_1,x_2,x_3,weight");
  const auto back = read_measure_csv(ss);
  EXPECT_TRUE(back.points() == mu.points());
  EXPECT_TRUE(back.weights() == mu.weights());
}

TEST(MeasureCsv, MalformedInput) {
  for (const char* text : {"x_1,weight\n0.5\n", "x_1,weight\nabc,1\n", "", "x_1,weight\n",
                           "x_1,weight\n0,0.5\n1,0.4\n"}) {
    std::stringstream ss(text);
    EXPECT_THROW(read_measure_csv(ss), IoError) << text;
  }
  EXPECT_THROW(read_measure_csv(std::string("/nonexistent/file.csv")), IoError);
}
