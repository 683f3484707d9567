#include <benchmark/benchmark.h>

#include <random>

#include "wasslab/wasserstein.hpp"

using namespace wasslab;

namespace {

DiscreteMeasure cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> W(0.1, 1.0);
  PointCloud x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = N(g);
    w[i] = W(g);
  }
  return DiscreteMeasure(std::move(x), w / w.sum());
}

void BM_W1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = cloud(n, 1, 1), nu = cloud(n, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(w1d(mu, nu, 2.0).distance);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1d)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

void BM_ExactTransportation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = cloud(n, 2, 3), nu = cloud(n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(w_exact(mu, nu, 2.0).distance);
}
BENCHMARK(BM_ExactTransportation)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_ExactAssignment(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 g(5);
  std::normal_distribution<double> N;
  PointCloud a(n, 2), b(n, 2);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = N(g);
    b.data()[i] = N(g);
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const DiscreteMeasure mu(a, w), nu(b, w);
  for (auto _ : state) benchmark::DoNotOptimize(w_exact(mu, nu, 2.0).distance);
}
BENCHMARK(BM_ExactAssignment)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double rel = 1.0 / static_cast<double>(state.range(1));
  const auto mu = cloud(n, 2, 6), nu = cloud(n, 2, 7);
  const double eps = rel * std::pow(cross_diameter(mu, nu), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(w_sinkhorn(mu, nu, 2.0, eps).distance_estimate);
}
BENCHMARK(BM_Sinkhorn)
    ->ArgsProduct({{32, 128}, {100, 10000}})
    ->ArgNames({"atoms", "inv_eps_rel"})
    ->Unit(benchmark::kMillisecond);

}  // namespace
