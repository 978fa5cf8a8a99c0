#pragma once

#include <array>
#include <cstddef>

#include "manycopies/qmath.hpp"

namespace manycopies::experiments {

// M_+- = (I +- epsilon sigma_axis)/2 with Kraus operators K_+- = sqrt(M_+-).
class UnsharpMeasurement {
 public:
  UnsharpMeasurement(double epsilon, Axis axis);

  double epsilon() const noexcept { return epsilon_; }
  Axis axis() const noexcept { return axis_; }
  // index 0 -> '+', 1 -> '-'
  const std::array<Operator, 2>& effects() const noexcept { return effects_; }
  const std::array<Operator, 2>& kraus() const noexcept { return kraus_; }
  // max |sum K^dagger K - I|
  double completeness_defect() const;
  // Non-selective update sum_k K rho K^dagger.
  DensityMatrix apply(const DensityMatrix& rho, const NumericConfig& config = default_config()) const;

 private:
  double epsilon_;
  Axis axis_;
  std::array<Operator, 2> effects_;
  std::array<Operator, 2> kraus_;
};

// sqrt(1 - epsilon^2): the largest |p+ - p-| a sharp z-measurement can show
// after an unsharp x-measurement of strength epsilon on one copy.
double sequential_bound(double epsilon);

struct SequentialOutcome {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double bound = 0.0;
  bool violated = false;  // |p+ - p-| > bound + 1e-9
  double contrast() const;
};

// Unsharp x-measurement then sharp z-projection on the same qubit.
SequentialOutcome sequential_single_copy(double epsilon, const DensityMatrix& rho0,
                                         const NumericConfig& config = default_config());

// Copies start in |+>^N (sigma_z = +1). The unsharp x-measurement acts on
// copy 1, the inter-copy collapse (x pointers, H = 0) runs for `delay`, then
// copy 2 is projected on sigma_z.
SequentialOutcome sequential_many_copy(double epsilon, std::size_t n_copies, double alpha, double delay,
                                       const NumericConfig& config = default_config());

}  // namespace manycopies::experiments
