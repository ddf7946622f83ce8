// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <cmath>

#include "gcollage/collage.hpp"
#include "gcollage/cube.hpp"
#include "gcollage/wce.hpp"

namespace {

using namespace gcollage;

QuadratureRule sweep_rule(double n) {
  RateParams params;
  params.alpha = 2;
  params.a = 2.0;
  const BaseFamily base = [](double m) { return change_of_variable_rule(smolyak_rule(m, 1, 2), 3); };
  return collage_direct(base, n, params, 1.0 / 6.0).rule;
}

QuadratureRule grid_rule(double n, int d) {
  RateParams params;
  params.d = d;
  const BaseFamily base = [d](double m) { return smolyak_rule(m, d, 1); };
  return collage_direct(base, n, params, 1.0 / 6.0).rule;
}

void BM_WceSpectral(benchmark::State &state) {
  const auto rule = sweep_rule(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wce_spectral(rule, 2, 20'000).err_m);
}

void BM_WceSpectralSerial(benchmark::State &state) {
  const auto rule = sweep_rule(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::wce_spectral(rule, 2, 20'000).err_m);
}

void BM_WceGram(benchmark::State &state) {
  const auto rule = sweep_rule(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wce_gram(rule, 2.0, 2'000));
}

void BM_WceGramSerial(benchmark::State &state) {
  const auto rule = sweep_rule(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::wce_gram(rule, 2.0, 2'000));
}

double f(std::span<const double> x) {
  double v = 1.0;
  for (double t : x) v *= std::cos(t);
  return v;
}

void BM_Integrate(benchmark::State &state) {
  const auto rule = grid_rule(static_cast<double>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(rule, f));
}

void BM_IntegrateSerial(benchmark::State &state) {
  const auto rule = grid_rule(static_cast<double>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(serial::integrate(rule, f));
}

} // namespace

BENCHMARK(BM_WceSpectral)->Arg(256)->Arg(2048);
BENCHMARK(BM_WceSpectralSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_WceGram)->Arg(64)->Arg(256);
BENCHMARK(BM_WceGramSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_Integrate)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_IntegrateSerial)->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
