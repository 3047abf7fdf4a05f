#include <benchmark/benchmark.h>

#include "trb/diagnostics.hpp"
#include "trb/grid_kernels.hpp"
#include "trb/problems.hpp"

using namespace trb;

namespace {

const ProblemInstance& instance() {
  static const ProblemInstance inst = generate(Family::MaxQuartic, 2, 40, 1);
  return inst;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_LatticeValues(benchmark::State& state) {
  const auto oracle = oracle_of(instance());
  const TrustRegion region(Point::Constant(2, 0.3), 0.5, NormKind::Euclidean);
  const Lattice lat(region, region.center(), region.radius(), static_cast<int>(state.range(0)));
  const ScalarField f = [&](const Point& z) { return oracle->value(z); };
  for (auto _ : state) benchmark::DoNotOptimize(lattice_values(f, lat, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lat.size()));
}

void BM_LatticeArgmin(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::cos(0.001 * static_cast<double>(k)) + 1e-9 * k;
  for (auto _ : state) benchmark::DoNotOptimize(lattice_argmin(v, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_MinimizeOverRegion(benchmark::State& state) {
  const auto oracle = oracle_of(instance());
  const TrustRegion region(Point::Constant(2, 0.3), 0.5, NormKind::MaxNorm);
  SearchOptions opt;
  opt.per_axis = static_cast<int>(state.range(0));
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(z_star_oracle(*oracle, region, opt));
}

}  // namespace

BENCHMARK(BM_LatticeValues)->ArgsProduct({{101, 401}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeArgmin)->ArgsProduct({{401, 2001}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinimizeOverRegion)->ArgsProduct({{101, 201}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
