#include <cmath>

#include <benchmark/benchmark.h>

#include "manycopies/manycopies.hpp"

using namespace manycopies;
using namespace manycopies::experiments;

namespace {

void BM_Tensor(benchmark::State& state) {
  const std::vector<Operator> ops(static_cast<std::size_t>(state.range(0)), pauli(Axis::x));
  for (auto _ : state) benchmark::DoNotOptimize(tensor(ops));
}
BENCHMARK(BM_Tensor)->DenseRange(2, 6);

void BM_BathEvolve(benchmark::State& state) {
  const CopySpace space(2, 2);
  const BathModel bath = centered_bath(space, std::sqrt(0.05), 0, static_cast<std::size_t>(state.range(0)));
  const BasisLabel start(space, {0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(bath_evolve(bath, start, 20.0, 0.0, 100));
}
BENCHMARK(BM_BathEvolve)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(-0.001 * double(i)) * std::cos(0.1 * double(i));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(x, 0.01, Window::hann));
}
BENCHMARK(BM_Spectrum)->Arg(1 << 12)->Arg(1 << 16);

void BM_SorkinTwoCopy(benchmark::State& state) {
  const double a = 1.0 / std::sqrt(3.0);
  const ThreeStateConfig cfg({a, a, a}, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(sorkin_functional(cfg, 2));
}
BENCHMARK(BM_SorkinTwoCopy);

}  // namespace
