#pragma once

#include <cstddef>

namespace manycopies {

// Every numeric tolerance and size limit used by the library lives here.
// Functions that validate or integrate take a `const NumericConfig&`
// defaulted to `default_config()`.
struct NumericConfig {
  double hermitian_tol = 1e-12;    // ||A - A^dagger||_inf for the hermitian flag
  double positive_tol = 1e-9;      // allowed negative eigenvalue for the positive flag
  double trace_tol = 1e-9;         // |Tr rho - 1| for density matrices
  double norm_tol = 1e-12;         // | ||psi|| - 1 | for normalized kets
  double eig_residual_tol = 1e-9;  // ||A v - lambda v|| after eigendecomposition
  double boundary_tol = 1e-12;     // slack granted to inclusive feasibility frontiers

  // Largest number of stored amplitudes in one dense object: kets may have
  // up to `dense_cap` entries, operators up to `dense_cap` matrix elements.
  std::size_t dense_cap = 4096;

  double trace_drift_max = 1e-6;    // accepted |Tr rho(t) - 1| during evolution
  double positivity_floor = -1e-6;  // smallest eigenvalue tolerated during evolution
  std::size_t positivity_check_max_dim = 64;
  double rk4_stability_limit = 2.5;  // (||H||/hbar + ||sum L^dagger L||) dt must stay below
};

inline const NumericConfig& default_config() {
  static const NumericConfig config{};
  return config;
}

}  // namespace manycopies
