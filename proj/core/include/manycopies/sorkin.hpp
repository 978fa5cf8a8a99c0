#pragma once

#include <array>
#include <string>

#include "manycopies/qmath.hpp"

namespace manycopies::experiments {

// |psi> = c1|1> + c2|2> + c3|3> with a two-copy interaction strength epsilon.
struct ThreeStateConfig {
  std::array<Complex, 3> amplitudes;
  double epsilon = 0.0;

  // Throws InvalidArgument unless sum |c_i|^2 = 1 within 1e-12.
  ThreeStateConfig(std::array<Complex, 3> amplitudes, double epsilon);
};

// O^A = |chi_A><chi_A| with chi_A = sum_{i in A} |i>, for the seven
// non-empty subsets of {1,2,3}. Order: 1, 2, 3, 12, 13, 23, 123.
struct SorkinObservables {
  std::array<Operator, 7> ops;
  std::array<std::string, 7> labels;
};
SorkinObservables sorkin_observables();

// sum <O^i> - sum <O^ij> + <O^123>, where <.> is Tr(O rho) for copies = 1
// and Tr((O x I + I x O + eps O x O) rho x rho) for copies = 2, evaluated
// with dense 3- and 9-dimensional matrices.
double sorkin_functional(const ThreeStateConfig& config, int copies);

// eps (2 |c1|^2 c23 + 2 |c2|^2 c13 + 2 |c3|^2 c12 + 2 (c12 c13 + c12 c23 + c13 c23)),
// c_ij = 2 Re(c_i conj(c_j)).
double sorkin_closed_form(const ThreeStateConfig& config);

}  // namespace manycopies::experiments
