#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "eqtri/length_spectrum.hpp"
#include "eqtri/wavepacket.hpp"

namespace {

using namespace eqtri;

const double kWidth = 1.0 / (10.0 * std::numbers::sqrt2);

ExpansionTable moving_packet(double p0) {
  const auto cfg = BilliardConfig::dimensionless();
  return expand(GaussianPacket::from_polar(0.0, std::numbers::sqrt3 / 3.0, p0, 10.9, kWidth), cfg);
}

void BM_compute_rho(benchmark::State& state) {
  const auto cfg = BilliardConfig::dimensionless();
  const auto grid = uniform_grid(20.0, 0.002);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_rho(cfg, static_cast<std::size_t>(state.range(0)), grid));
  }
}
BENCHMARK(BM_compute_rho)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_expand(benchmark::State& state) {
  const auto cfg = BilliardConfig::dimensionless();
  const auto pk = GaussianPacket::from_polar(0.0, std::numbers::sqrt3 / 3.0, static_cast<double>(state.range(0)), 10.9,
                                             kWidth);
  for (auto _ : state) benchmark::DoNotOptimize(expand(pk, cfg));
}
BENCHMARK(BM_expand)->Arg(0)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

void BM_autocorrelation(benchmark::State& state) {
  const auto cfg = BilliardConfig::dimensionless();
  const auto table = moving_packet(1500.0);
  std::vector<double> times(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 1e-5 * static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(table, cfg, times));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_autocorrelation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_density_snapshot(benchmark::State& state) {
  const auto cfg = BilliardConfig::dimensionless();
  const auto table = moving_packet(500.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(density_snapshot(table, cfg, 3e-4, {n, n}));
}
BENCHMARK(BM_density_snapshot)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
