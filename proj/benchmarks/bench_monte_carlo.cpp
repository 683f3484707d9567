#include <benchmark/benchmark.h>

#include <vector>

#include "wasslab/dirichlet.hpp"
#include "wasslab/ou_sim.hpp"

using namespace wasslab;

namespace {

struct Model {
  explicit Model(std::size_t M, std::size_t N)
      : spectrum(make_spectrum(PowerLaw{1.0, 2.0}, M)),
        base(make_base_measure(BaseKind::uniform01, N)),
        basis(eigenbasis_cosine(base, M)) {}
  Spectrum spectrum;
  BaseMeasure base;
  EigenBasis basis;
};

void BM_FormEnergy(benchmark::State& state) {
  const Model m(8, static_cast<std::size_t>(state.range(0)));
  const auto u = catalogue::function("tanh_mean");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        form_energy_mc(u, CoefficientField::identity(), m.spectrum, m.basis, 10'000, 1).value);
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_FormEnergy)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulatePath(benchmark::State& state) {
  const Model m(static_cast<std::size_t>(state.range(0)), 2 * static_cast<std::size_t>(state.range(0)));
  std::vector<double> grid(100);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 0.01 * static_cast<double>(k);
  std::uint64_t path = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_path(m.spectrum, grid, StationaryInit{}, 1, path++).states().back());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_SimulatePath)->Arg(8)->Arg(64)->Arg(512);

void BM_SemigroupCheck(benchmark::State& state) {
  const auto spectrum = make_spectrum(PowerLaw{1.0, 2.0}, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(semigroup_eigen_check(3, spectrum, 0, 0.5, 0.8, 100'000, 1).lhs.value);
  }
}
BENCHMARK(BM_SemigroupCheck)->Unit(benchmark::kMillisecond);

void BM_IbpCheck(benchmark::State& state) {
  const Model m(8, 64);
  const auto u = catalogue::function("tanh_mean");
  const auto v = catalogue::function("sin_second_moment");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ibp_check(u, v, 0, m.spectrum, m.basis, 10'000, 1).difference.value);
  }
}
BENCHMARK(BM_IbpCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
