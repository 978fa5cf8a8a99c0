#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "manycopies/copy_space.hpp"
#include "manycopies/dynamics.hpp"

namespace manycopies {

// Qubit copies coupled to a uniformly discretized energy continuum. From
// |s,0> (energy -E_c k_s^2) the system can only reach |+..+,E_i> and
// |-..-,E_i>, both with energy E_i - E_c N^2.
struct BathModel {
  CopySpace space;
  double alpha = 0.0;  // target Lindblad amplitude
  double e_c = 0.0;
  std::size_t n_levels = 0;
  double e_max = 0.0;
  double hbar = 1.0;
  double density_of_states = 0.0;  // g = n_levels / e_max
  std::vector<double> levels;      // E_i = (i + 1/2) e_max / n_levels

  // Real coupling f_sign between |s,0> and every level of the sign family,
  // sign = +1 for |+..+>, -1 for |-..->. Depends on s only through k_s.
  double coupling(std::int64_t k, int sign) const;
  // E_c (N^2 - k^2): the bath level in resonance with |s,0>.
  double resonance(std::int64_t k) const;
};

// Couplings chosen so the golden-rule rate into each family equals the
// Lindblad rate alpha^2 (N +- k_s): |f_+-|^2 = hbar alpha^2 (N +- k_s) / (2 pi g).
// Requires n_levels >= 2 and e_max > E_c N^2.
BathModel bath_from_rate(const CopySpace& space, double alpha, double e_c, std::size_t n_levels,
                         double e_max, double hbar = 1.0);

// Band scaled as e_max = reference_e_max sqrt(n_levels / reference_levels)
// with the resonance of spin sum k placed at the band centre. Refining the
// discretization this way shrinks both the level spacing and the band-edge
// error, so the golden-rule limit is approached monotonically.
BathModel centered_bath(const CopySpace& space, double alpha, std::int64_t k, std::size_t n_levels,
                        double reference_e_max = 8.0, std::size_t reference_levels = 50,
                        double hbar = 1.0);

struct BathSeries {
  std::vector<double> times;
  std::vector<double> initial;       // |<s,0|psi(t)>|^2
  std::vector<double> plus_family;   // sum_i |<+..+,E_i|psi(t)>|^2
  std::vector<double> minus_family;  // sum_i |<-..-,E_i|psi(t)>|^2
  double norm_drift = 0.0;           // max | ||psi||^2 - 1 |
};

// Schroedinger propagation (RK4 on the 1 + 2 n_levels sector). dt = 0 picks
// 0.05 / ||H|| bound. Throws CapExceeded if the sector exceeds the ket cap.
BathSeries bath_evolve(const BathModel& bath, const BasisLabel& initial, double t_final, double dt = 0.0,
                       std::size_t record_stride = 1, const NumericConfig& config = default_config());

// Least-squares slope of -ln(survival) over samples with time <= t_max.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& survival, double t_max);

struct BathComparisonOptions {
  double fit_lifetimes = 2.0;    // rate fitted over [0, fit_lifetimes / Gamma]
  double total_lifetimes = 4.0;  // branching read at total_lifetimes / Gamma
  double dt = 0.0;
};

struct BathComparison {
  double bath_rate = 0.0;
  double lindblad_rate = 0.0;
  double rate_error = 0.0;  // relative
  double bath_branching = 0.0;      // plus / (plus + minus)
  double lindblad_branching = 0.0;  // pointer weight of |+..+>
  double branching_error = 0.0;     // relative
  double max_survival_deviation = 0.0;  // max |S_bath(t) - S_lindblad(t)| on the fit window
};

// Runs the bath and the equivalent collapse Lindblad model (structured
// engine) from the same basis state and compares decay rate and branching.
BathComparison compare_bath_to_lindblad(const BathModel& bath, const BasisLabel& initial,
                                        const BathComparisonOptions& options = {},
                                        const NumericConfig& config = default_config());

}  // namespace manycopies
