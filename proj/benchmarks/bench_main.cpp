#include <benchmark/benchmark.h>

#include "mtlab/cubic.hpp"
#include "mtlab/kink.hpp"
#include "mtlab/lattice.hpp"
#include "mtlab/liouville.hpp"
#include "mtlab/tw_ode.hpp"

using namespace mtlab;

static void BM_SolveCubic(benchmark::State& state) {
  double s = -0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cubic(s));
    s = s > 0.37 ? -0.37 : s + 1e-3;
  }
}
BENCHMARK(BM_SolveCubic);

static void BM_TravelingWave(benchmark::State& state) {
  const auto k = KinkProfile::from_sigma(0.1);
  const double rho = consistent_rho(k.roots);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_traveling_wave(rho, 0.1, kink_value(k, -10), kink_slope(k, -10), -10, 10, 0.01));
  }
}
BENCHMARK(BM_TravelingWave);

static void BM_LatticeStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto s = lattice::init_kink(n, 0.05, solve_cubic(0.1), 0.0, 0.25 * (n - 1) * 0.05, 0.3);
  s.sigma = 0.1;
  for (auto _ : state) {
    lattice::step(s, 0.02);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_LatticeStep)->Arg(1 << 10)->Arg(1 << 14);

static void BM_LiouvilleEvolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const liouville::Domain d{-4, 4, -4, 4, n, n};
  const auto model = liouville::CouplingModel::separable(1.0, liouville::Polynomial{{0, 0, 0.5}},
                                                         liouville::Polynomial{{0, -0.3}},
                                                         liouville::Polynomial{{1.0}}, d);
  const auto scheme = state.range(1) ? liouville::Scheme::Limited : liouville::Scheme::Upwind;
  const liouville::Evolver ev(model, true, scheme);
  auto grid = liouville::gaussian_blob(d, 1.0, 0.0, 0.5);
  const double dt = ev.max_stable_dt();
  for (auto _ : state) {
    ev.evolve(grid, dt);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_LiouvilleEvolve)->Args({128, 0})->Args({128, 1})->Args({256, 1});

static void BM_SweepCell(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lattice::run_sweep_cell(0.1, 0.3));
}
BENCHMARK(BM_SweepCell)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
