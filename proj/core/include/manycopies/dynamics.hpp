#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "manycopies/collapse.hpp"
#include "manycopies/qmath.hpp"

namespace manycopies {

// d rho/dt = [H, rho]/(i hbar) + sum_L (L rho L^dagger - {L^dagger L, rho}/2)
class LindbladModel {
 public:
  LindbladModel(Operator hamiltonian, std::vector<Operator> jumps, double hbar = 1.0);

  const Operator& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<Operator>& jumps() const noexcept { return jumps_; }
  double hbar() const noexcept { return hbar_; }
  std::size_t dim() const noexcept { return hamiltonian_.dim(); }

  // sum_L L^dagger L
  const ComplexMatrix& decay_operator() const noexcept { return decay_; }
  // 2 ||H||/hbar + ||sum L^dagger L||, a bound on the generator's spectral radius.
  double stiffness() const noexcept { return stiffness_; }

 private:
  Operator hamiltonian_;
  std::vector<Operator> jumps_;
  double hbar_;
  ComplexMatrix decay_;
  double stiffness_;
};

// Inter-copy collapse plus identical local Hamiltonians and optional
// per-copy objective collapse gamma P_m^{(j)} in the same pointer basis.
struct CollapseDynamics {
  CollapseModel collapse;
  Operator local_h;  // d x d hermitian
  double objective_gamma = 0.0;
  double hbar = 1.0;

  CollapseDynamics(CollapseModel collapse, Operator local_h, double objective_gamma = 0.0,
                   double hbar = 1.0);
  // Pure collapse, H = 0.
  explicit CollapseDynamics(CollapseModel collapse);

  // sum_L L^dagger L as a scalar multiple of identity.
  double total_decay_rate() const;
  // ||local H|| times N, the spectral radius of the copy Hamiltonian.
  double hamiltonian_norm() const;
};

// Dense materialization of every jump (collapse family plus objective collapse).
LindbladModel to_lindblad(const CollapseDynamics& dynamics,
                          const NumericConfig& config = default_config());

struct EvolveOptions {
  std::size_t record_stride = 1;  // keep every k-th step (first and last always kept)
  bool check_positivity = true;   // eigenvalue check of recorded states when dim <= limit
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  double trace_drift = 0.0;  // max |Tr rho(t) - 1| over all steps
  double min_eigenvalue = std::numeric_limits<double>::infinity();  // over checked outputs
  std::size_t steps = 0;
  double dt = 0.0;  // step actually used (t_final / steps)

  const ComplexMatrix& final_state() const { return states.back(); }
};

// Step satisfying (||H||/hbar + total decay) dt = 0.05.
double recommended_dt(const LindbladModel& model);
double recommended_dt(const CollapseDynamics& dynamics);

// Fixed-step classical RK4 on the dense master equation. Throws
// IntegrationError when dt is outside the stability region, when the
// trace drifts beyond trace_drift_max, or when a checked state has an
// eigenvalue below positivity_floor.
EvolutionResult evolve_dense(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                             double dt, const EvolveOptions& options = {},
                             const NumericConfig& config = default_config());

// Same integrator, exploiting sum L^dagger L = Gamma I and the rank-one
// jump structure: the gain term needs only the pointer-frame diagonal.
// No jump operator is ever materialized.
EvolutionResult evolve_structured(const CollapseDynamics& dynamics, const DensityMatrix& rho0,
                                  double t_final, double dt, const EvolveOptions& options = {},
                                  const NumericConfig& config = default_config());

// Superoperator route for small systems (dim <= 16): exp(L t) vec(rho0),
// using Pade scaling-and-squaring on the vectorized generator.
ComplexMatrix evolve_exact(const LindbladModel& model, const DensityMatrix& rho0, double t,
                           const NumericConfig& config = default_config());

// <m..m| rho |m..m> for every pointer m, with rho in the computational frame.
std::vector<double> pointer_populations(const CollapseModel& model, const ComplexMatrix& rho,
                                        const NumericConfig& config = default_config());
// |<m..m| rho |n..n>|.
double pointer_coherence(const CollapseModel& model, const ComplexMatrix& rho, std::size_t m,
                         std::size_t n, const NumericConfig& config = default_config());

enum class Engine { dense, structured };

struct FinalStateOptions {
  Engine engine = Engine::structured;
  double dt = 0.0;        // 0 selects recommended_dt
  double max_time = 0.0;  // 0 selects 1e4 / total decay rate
  double rate_tol = 1e-10;  // stop when max pointer-population change per unit time drops below
};

struct FinalState {
  DensityMatrix state;
  std::vector<double> pointer_weights;
  double time = 0.0;
};

// Evolve to the collapsed limit. Requires the local Hamiltonian to commute
// with every local pointer projector; throws ConvergenceError past max_time.
FinalState final_state(const CollapseDynamics& dynamics, const DensityMatrix& rho0,
                       const FinalStateOptions& options = {},
                       const NumericConfig& config = default_config());

struct TrajectoryHistogram {
  std::vector<std::size_t> counts;  // trajectories ending in pointer product m
  std::size_t unresolved = 0;       // trajectories not in any pointer product at t_final
  std::size_t n_traj = 0;
  std::size_t total_jumps = 0;
  std::vector<double> mean_pointer_populations;  // trajectory average at t_final
  std::vector<double> stderr_pointer_populations;
};

// Quantum-jump unraveling with norm-threshold jump detection. Trajectory i
// draws from an mt19937_64 seeded with splitmix64(seed, i), so the result is
// independent of `workers`.
TrajectoryHistogram jump_trajectories(const CollapseDynamics& dynamics, const Ket& psi0,
                                      double t_final, double dt, std::size_t n_traj,
                                      std::uint64_t seed, std::size_t workers = 1,
                                      const NumericConfig& config = default_config());

// splitmix64 finalizer applied to seed + stream * golden gamma.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace manycopies
