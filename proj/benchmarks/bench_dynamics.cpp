#include <benchmark/benchmark.h>

#include "manycopies/manycopies.hpp"

using namespace manycopies;

namespace {

CollapseDynamics qubit_dynamics(std::size_t n) {
  return CollapseDynamics(CollapseModel(CopySpace(n, 2), 0.5), pauli(Axis::z));
}

DensityMatrix plus_state(std::size_t n) {
  const ComplexVector psi = Ket::pauli_eigenstate(Axis::x, 1).amplitudes();
  return product_state(DensityMatrix::pure(Ket(psi)), CopySpace(n, 2));
}

void BM_EvolveDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CollapseDynamics dyn = qubit_dynamics(n);
  const LindbladModel model = to_lindblad(dyn);
  const DensityMatrix rho0 = plus_state(n);
  const double dt = recommended_dt(dyn);
  EvolveOptions opts;
  opts.record_stride = 1u << 30;
  opts.check_positivity = false;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_dense(model, rho0, 100 * dt, dt, opts));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_EvolveDense)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_EvolveStructured(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CollapseDynamics dyn = qubit_dynamics(n);
  const DensityMatrix rho0 = plus_state(n);
  const double dt = recommended_dt(dyn);
  EvolveOptions opts;
  opts.record_stride = 1u << 30;
  opts.check_positivity = false;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_structured(dyn, rho0, 100 * dt, dt, opts));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_EvolveStructured)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

void BM_JumpTrajectories(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CollapseDynamics dyn{CollapseModel(CopySpace(n, 2), 0.5)};
  const Ket psi = product_ket(Ket::pauli_eigenstate(Axis::x, 1), CopySpace(n, 2));
  const double gamma = dyn.total_decay_rate();
  for (auto _ : state)
    benchmark::DoNotOptimize(jump_trajectories(dyn, psi, 10.0 / gamma, 0.05 / gamma, 100, 1));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_JumpTrajectories)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
