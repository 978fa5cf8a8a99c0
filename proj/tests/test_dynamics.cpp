#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "manycopies/dynamics.hpp"

using namespace manycopies;

namespace {

std::vector<ComplexMatrix> raw(const std::vector<Operator>& ops) {
  std::vector<ComplexMatrix> out;
  for (const auto& o : ops) out.push_back(o.matrix());
  return out;
}

LindbladModel random_model(oracle::Rng& rng, Eigen::Index n, int jumps, double hbar = 1.0) {
  std::vector<Operator> ls;
  for (int i = 0; i < jumps; ++i) ls.emplace_back(0.4 * rng.matrix(n));
  return LindbladModel(Operator::hermitian(rng.hermitian(n)), ls, hbar);
}

}  // namespace

TEST_CASE("dense RK4 converges to the exact semigroup") {
  oracle::Rng rng(101);
  const LindbladModel model = random_model(rng, 3, 2, 0.8);
  const DensityMatrix rho0(rng.density(3));
  const ComplexMatrix ref =
      oracle::lindblad_exact(model.hamiltonian().matrix(), raw(model.jumps()), rho0.matrix(), 1.5, 0.8);
  const auto res = evolve_dense(model, rho0, 1.5, recommended_dt(model));
  CHECK(oracle::max_abs(res.final_state() - ref) < 1e-8);
  CHECK(res.trace_drift < 1e-12);
  CHECK(res.min_eigenvalue > -1e-12);
  CHECK(oracle::max_abs(evolve_exact(model, rho0, 1.5) - ref) < 1e-11);
}

TEST_CASE("RK4 error shrinks with the fourth power of the step") {
  oracle::Rng rng(7);
  const LindbladModel model = random_model(rng, 2, 1);
  const DensityMatrix rho0(rng.density(2));
  const ComplexMatrix ref = oracle::lindblad_exact(model.hamiltonian().matrix(), raw(model.jumps()), rho0.matrix(), 1.0);
  const double dt = 0.1;
  const double e1 = oracle::max_abs(evolve_dense(model, rho0, 1.0, dt).final_state() - ref);
  const double e2 = oracle::max_abs(evolve_dense(model, rho0, 1.0, dt / 2).final_state() - ref);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("recording stride keeps endpoints") {
  oracle::Rng rng(8);
  const LindbladModel model = random_model(rng, 2, 1);
  const DensityMatrix rho0(rng.density(2));
  EvolveOptions opts;
  opts.record_stride = 3;
  const auto res = evolve_dense(model, rho0, 1.0, 0.1, opts);
  CHECK(res.steps == 10);
  CHECK(res.times.front() == 0.0);
  CHECK(res.times.back() == doctest::Approx(1.0));
  CHECK(res.times.size() == res.states.size());
  CHECK(res.times.size() == 5);  // 0, 3, 6, 9, 10
}

TEST_CASE("unstable step is rejected") {
  oracle::Rng rng(9);
  const LindbladModel model = random_model(rng, 2, 1);
  const DensityMatrix rho0(rng.density(2));
  const double dt = 3.0 / model.stiffness();
  CHECK_THROWS_AS(evolve_dense(model, rho0, 10.0, dt), IntegrationError);
  CHECK_THROWS(evolve_dense(model, rho0, -1.0, 0.01));
  CHECK_THROWS(evolve_dense(model, DensityMatrix::maximally_mixed(3), 1.0, 0.01));
}

TEST_CASE("master equation right-hand side matches the textbook form") {
  // One RK4 step equals the Taylor series of the generator up to dt^4.
  oracle::Rng rng(10);
  const LindbladModel model = random_model(rng, 3, 2);
  const ComplexMatrix rho0 = rng.density(3);
  const auto h = model.hamiltonian().matrix();
  const auto ls = raw(model.jumps());
  const double dt = 1e-3;
  ComplexMatrix term = rho0, taylor = rho0;
  for (int k = 1; k <= 4; ++k) {
    term = oracle::lindblad_rhs(h, ls, term) * (dt / k);
    taylor += term;
  }
  const auto res = evolve_dense(model, DensityMatrix(rho0), dt, dt);
  CHECK(oracle::max_abs(res.final_state() - taylor) < 1e-14);
}

TEST_CASE("structured engine equals dense with hamiltonian and objective collapse") {
  oracle::Rng rng(12);
  for (Axis axis : {Axis::z, Axis::x}) {
    const CopySpace space(3, 2);
    const CollapseModel model(space, 0.35, pauli_eigenbasis(axis), OccupationConvention::qubit_signed);
    const CollapseDynamics dyn(model, Operator::hermitian(rng.hermitian(2)), 0.3);
    const DensityMatrix rho0(rng.density(8));
    const double dt = recommended_dt(dyn);
    const auto d = evolve_dense(to_lindblad(dyn), rho0, 2.0, dt);
    const auto s = evolve_structured(dyn, rho0, 2.0, dt);
    CHECK(oracle::max_abs(d.final_state() - s.final_state()) < 1e-12);
  }
}

TEST_CASE("structured engine matches the exact semigroup for qutrits") {
  oracle::Rng rng(13);
  const CopySpace space(2, 3);
  const CollapseDynamics dyn(CollapseModel(space, 0.5), Operator::hermitian(rng.hermitian(3)), 0.2);
  const LindbladModel lm = to_lindblad(dyn);
  const DensityMatrix rho0(rng.density(9));
  const ComplexMatrix ref = oracle::lindblad_exact(lm.hamiltonian().matrix(), raw(lm.jumps()), rho0.matrix(), 1.0);
  const auto s = evolve_structured(dyn, rho0, 1.0, recommended_dt(dyn) / 2);
  CHECK(oracle::max_abs(s.final_state() - ref) < 1e-8);
}

TEST_CASE("dense evolution is positive and trace preserving") {
  oracle::Rng rng(14);
  const CopySpace space(2, 2);
  const CollapseDynamics dyn(CollapseModel(space, 0.6), Operator::hermitian(rng.hermitian(2)));
  const auto r = evolve_dense(to_lindblad(dyn), DensityMatrix(rng.density(4)), 5.0, recommended_dt(dyn));
  CHECK(r.trace_drift < 1e-12);
  CHECK(r.min_eigenvalue > -1e-10);
  for (const auto& st : r.states) CHECK(hermiticity_defect(st) < 1e-12);
}

TEST_CASE("exact evolution is limited to small systems") {
  const CopySpace space(5, 2);
  const CollapseDynamics dyn(CollapseModel(space, 0.5));
  CHECK_THROWS_AS(evolve_exact(to_lindblad(dyn), DensityMatrix::maximally_mixed(32), 1.0), CapExceeded);
}

TEST_CASE("final state obeys Born weights and kills coherences") {
  const CopySpace space(3, 2);
  const CollapseDynamics dyn{CollapseModel(space, 0.5)};
  ComplexVector local(2);
  local << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const DensityMatrix rho0 = product_state(DensityMatrix::pure(Ket(local)), space);
  for (Engine e : {Engine::dense, Engine::structured}) {
    FinalStateOptions opts;
    opts.engine = e;
    const FinalState f = final_state(dyn, rho0, opts);
    CHECK(f.pointer_weights[0] == doctest::Approx(0.36).epsilon(1e-9));
    CHECK(f.pointer_weights[1] == doctest::Approx(0.64).epsilon(1e-9));
    CHECK(pointer_coherence(dyn.collapse, f.state.matrix(), 0, 1) < 1e-6);
  }
}

TEST_CASE("final state refuses non-commuting hamiltonians") {
  const CopySpace space(2, 2);
  const CollapseDynamics dyn(CollapseModel(space, 0.5), pauli(Axis::x));
  CHECK_THROWS(final_state(dyn, DensityMatrix::maximally_mixed(4)));
  const CollapseDynamics ok(CollapseModel(space, 0.5), pauli(Axis::z));
  CHECK_NOTHROW(final_state(ok, DensityMatrix::maximally_mixed(4)));
}

TEST_CASE("pointer populations") {
  const CopySpace space(2, 2);
  const CollapseModel model(space, 0.5, pauli_eigenbasis(Axis::x), OccupationConvention::qubit_signed);
  const Ket plus = product_ket(Ket::pauli_eigenstate(Axis::x, 1), space);
  const auto p = pointer_populations(model, DensityMatrix::pure(plus).matrix());
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("stream seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_stream_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_stream_seed(42, 3) == derive_stream_seed(42, 3));
  CHECK(derive_stream_seed(42, 3) != derive_stream_seed(43, 3));
}

TEST_CASE("jump trajectories are independent of the worker count") {
  const CopySpace space(3, 2);
  const CollapseDynamics dyn{CollapseModel(space, 0.5)};
  const Ket psi = Ket::basis(8, BasisLabel(space, {0, 1, 1}).index(space));
  const double t = 20.0 / dyn.total_decay_rate();
  const auto a = jump_trajectories(dyn, psi, t, 0.05 / dyn.total_decay_rate(), 400, 5, 1);
  const auto b = jump_trajectories(dyn, psi, t, 0.05 / dyn.total_decay_rate(), 400, 5, 3);
  CHECK(a.counts == b.counts);
  CHECK(a.total_jumps == b.total_jumps);
  CHECK(a.unresolved == 0);
  CHECK(a.counts[0] + a.counts[1] == 400);
  // k = 2 of 3 minus entries.
  const double p = 2.0 / 3.0, sigma = std::sqrt(p * (1 - p) / 400);
  CHECK(std::abs(double(a.counts[1]) / 400 - p) < 4 * sigma);
}

TEST_CASE("jump trajectories with a hamiltonian track the master equation") {
  // Ensemble mean of pointer populations vs the dense solution at a finite time.
  oracle::Rng rng(15);
  const CopySpace space(2, 2);
  const CollapseDynamics dyn(CollapseModel(space, 0.4), Operator::hermitian(rng.hermitian(2)), 0.2);
  const Ket psi = Ket::normalized(rng.unit_vector(4));
  const double t = 1.5;
  const auto h = jump_trajectories(dyn, psi, t, 0.002, 4000, 99, 2);
  const auto ref = evolve_dense(to_lindblad(dyn), DensityMatrix::pure(psi), t, recommended_dt(dyn));
  const auto pops = pointer_populations(dyn.collapse, ref.final_state());
  for (std::size_t m = 0; m < 2; ++m) {
    CHECK(std::abs(h.mean_pointer_populations[m] - pops[m]) < 4 * h.stderr_pointer_populations[m] + 2e-3);
  }
}

TEST_CASE("trajectory argument validation") {
  const CopySpace space(2, 2);
  const CollapseDynamics dyn{CollapseModel(space, 0.5)};
  CHECK_THROWS(jump_trajectories(dyn, Ket::basis(4, 0), 1.0, 0.01, 0, 1));
  CHECK_THROWS(jump_trajectories(dyn, Ket::basis(8, 0), 1.0, 0.01, 10, 1));
  CHECK_THROWS(jump_trajectories(dyn, Ket::basis(4, 0), 1.0, -0.01, 10, 1));
}
