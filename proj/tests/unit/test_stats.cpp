#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wasslab/parallel.hpp"
#include "wasslab/rng.hpp"
#include "wasslab/stats.hpp"

using namespace wasslab;

TEST(Stats, EstimateMean) {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const auto e = estimate_mean(v, 5);
  EXPECT_DOUBLE_EQ(e.value, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(e.n_samples, 4u);
  EXPECT_EQ(e.seed, 5u);
  const std::vector<double> c(10, 3.0);
  EXPECT_EQ(estimate_mean(c, 0).std_error, 0.0);
}

TEST(Stats, CompensatedSum) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(Stats, PairwiseSum) {
  std::vector<double> v(10'001, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 1000.1, 1e-10);
}

TEST(Stats, KolmogorovSurvivalKnownValues) {
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 2e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(0.0), 1.0, 1e-12);
  EXPECT_LT(kolmogorov_survival(5.0), 1e-20);
}

TEST(Stats, KsDetectsShiftAndAcceptsSameLaw) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> N;
  std::vector<double> a(2000), b(2000), c(2000);
  for (auto& x : a) x = N(g);
  for (auto& x : b) x = N(g);
  for (auto& x : c) x = N(g) + 0.3;
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
}

TEST(Stats, KsFalseRejectionRate) {
  std::normal_distribution<double> N;
  int rejections = 0;
  for (std::uint64_t r = 0; r < 400; ++r) {
    auto g = rng::stream(77, r);
    std::vector<double> a(300), b(300);
    for (auto& x : a) x = N(g);
    for (auto& x : b) x = N(g);
    if (ks_two_sample(a, b).p_value < 0.05) ++rejections;
  }
  EXPECT_LE(rejections, 40);
}

TEST(Rng, StreamsAreIndependentAndReproducible) {
  auto a = rng::stream(1, 0), b = rng::stream(1, 0), c = rng::stream(1, 1), d = rng::stream(2, 0);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_NE(rng::derive(5, 1), rng::derive(5, 2));
}

TEST(Parallel, ChunksCoverRangeAndPropagateErrors) {
  std::vector<int> hit(1000, 0);
  for_each_chunk(1000, 7, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hit[i];
  });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(for_each_chunk(10, 3,
                              [](std::size_t c, std::size_t, std::size_t) {
                                if (c == 1) throw std::runtime_error("x");
                              }),
               std::runtime_error);
}
