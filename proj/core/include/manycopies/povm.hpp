#pragma once

#include <array>
#include <string>
#include <vector>

#include "manycopies/qmath.hpp"

namespace manycopies::povm {

// P_+- = (1 +- epsilon sigma_z)/2 and Q_+- = (1 +- delta sigma_x)/2.
struct UnsharpPair {
  double epsilon;
  double delta;
  UnsharpPair(double epsilon, double delta);
};

// Sharp but lossy projections P_+ -> lambda P_+ and Q_+ -> eta Q_+.
struct FaultyPair {
  double lambda;
  double eta;
  FaultyPair(double lambda, double eta);
};

// Outcome signs index as 0 -> '+', 1 -> '-'.
struct JointPOVM {
  std::array<std::array<Operator, 2>, 2> effects;  // effects[a][b] = M_ab

  const Operator& at(int a_sign, int b_sign) const {
    return effects[a_sign > 0 ? 0 : 1][b_sign > 0 ? 0 : 1];
  }
  // Smallest eigenvalue over all four effects.
  double min_eigenvalue() const;
  // max |sum_ab M_ab - I|.
  double completeness_defect() const;
  // Largest entrywise deviation of the row / column sums from the targets.
  double marginal_defect(const std::array<Operator, 2>& row_targets,
                         const std::array<Operator, 2>& col_targets) const;
};

// (1 + sign * sharpness * sigma_axis) / 2.
Operator unsharp_effect(Axis axis, double sharpness, int sign);

// epsilon^2 + delta^2 <= 1 (boundary inclusive).
bool unsharp_feasible(const UnsharpPair& pair, const NumericConfig& config = default_config());

// The unbiased family M_ab = I/4 + A_ab sigma_z + B_ab sigma_x with
// A_{++} = -A_{-+} = epsilon/4, A_{--} = -A_{+-} = -epsilon/4 and the same
// pattern for B with delta. Throws FrontierViolation (value = eps^2+delta^2)
// when the pair is infeasible.
JointPOVM construct_joint_unsharp(const UnsharpPair& pair,
                                  const NumericConfig& config = default_config());

// 2 - lambda - eta >= sqrt(lambda^2 + eta^2) (boundary inclusive). On the
// symmetric slice lambda = eta this reduces to lambda <= 2 - sqrt(2).
bool faulty_feasible(const FaultyPair& pair, const NumericConfig& config = default_config());

// The forced remainder M_{--} = I - lambda P_+ - eta Q_+ once M_{++} = 0.
Operator faulty_remainder(const FaultyPair& pair);

struct NoGoStep {
  std::string outcome;        // "++", "+-", "-+", "--"
  std::size_t support_dim;    // dim(range P_a intersect range Q_b)
};

// Constructive infeasibility argument for sharp sigma_z / sigma_x
// projections: every M_ab must live in range(P_a) and range(Q_b), which
// intersect trivially, so all effects vanish and their sum misses identity.
struct NoGoCertificate {
  bool infeasible = false;
  std::vector<NoGoStep> steps;
  double residual = 0.0;  // Frobenius norm of (sum of forced effects) - I
  std::vector<std::string> chain;  // human-readable reasoning, one line per step
};

NoGoCertificate sharp_nogo_certificate();

}  // namespace manycopies::povm
