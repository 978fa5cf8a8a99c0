#include "manycopies/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace manycopies::povm {

namespace {

Operator affine_qubit(double c, double a_z, double b_x) {
  const Operator sz = pauli(Axis::z);
  const Operator sx = pauli(Axis::x);
  return c * Operator::identity(2) + a_z * sz + b_x * sx;
}

const char* outcome_name(std::size_t a, std::size_t b) {
  static const char* names[2][2] = {{"++", "+-"}, {"-+", "--"}};
  return names[a][b];
}

}  // namespace

UnsharpPair::UnsharpPair(double epsilon_, double delta_) : epsilon(epsilon_), delta(delta_) {
  if (!(std::abs(epsilon) <= 1.0) || !(std::abs(delta) <= 1.0)) {
    throw InvalidArgument("unsharp pair requires |epsilon| <= 1 and |delta| <= 1");
  }
}

FaultyPair::FaultyPair(double lambda_, double eta_) : lambda(lambda_), eta(eta_) {
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("faulty pair requires 0 <= lambda, eta <= 1");
  }
}

double JointPOVM::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : effects) {
    for (const auto& m : row) lo = std::min(lo, manycopies::min_eigenvalue(m.matrix()));
  }
  return lo;
}

double JointPOVM::completeness_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& row : effects) {
    for (const auto& m : row) sum += m.matrix();
  }
  return (sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
}

double JointPOVM::marginal_defect(const std::array<Operator, 2>& row_targets,
                                  const std::array<Operator, 2>& col_targets) const {
  double worst = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    const ComplexMatrix row = effects[a][0].matrix() + effects[a][1].matrix();
    worst = std::max(worst, (row - row_targets[a].matrix()).cwiseAbs().maxCoeff());
  }
  for (std::size_t b = 0; b < 2; ++b) {
    const ComplexMatrix col = effects[0][b].matrix() + effects[1][b].matrix();
    worst = std::max(worst, (col - col_targets[b].matrix()).cwiseAbs().maxCoeff());
  }
  return worst;
}

Operator unsharp_effect(Axis axis, double sharpness, int sign) {
  const double s = sign > 0 ? sharpness : -sharpness;
  return Operator::positive((0.5 * (Operator::identity(2) + s * pauli(axis))).matrix());
}

bool unsharp_feasible(const UnsharpPair& pair, const NumericConfig& config) {
  return pair.epsilon * pair.epsilon + pair.delta * pair.delta <= 1.0 + config.boundary_tol;
}

JointPOVM construct_joint_unsharp(const UnsharpPair& pair, const NumericConfig& config) {
  const double radius2 = pair.epsilon * pair.epsilon + pair.delta * pair.delta;
  if (!unsharp_feasible(pair, config)) {
    throw FrontierViolation("epsilon^2 + delta^2 = " + std::to_string(radius2) +
                                " exceeds 1; no joint POVM exists",
                            radius2);
  }
  const double a = pair.epsilon / 4.0;
  const double b = pair.delta / 4.0;
  // A_{+-} = -A_{--} = a, A_{-+} = -A_{++} = -a; B_{+-} = -B_{++} = -b, B_{-+} = -B_{--} = b.
  const double coeff_a[2][2] = {{a, a}, {-a, -a}};
  const double coeff_b[2][2] = {{b, -b}, {b, -b}};

  JointPOVM joint;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const Operator m = affine_qubit(0.25, coeff_a[i][j], coeff_b[i][j]);
      joint.effects[i][j] = Operator::positive(m.matrix(), config);
    }
  }
  return joint;
}

bool faulty_feasible(const FaultyPair& pair, const NumericConfig& config) {
  const double lhs = 2.0 - pair.lambda - pair.eta;
  const double rhs = std::hypot(pair.lambda, pair.eta);
  return lhs - rhs >= -config.boundary_tol;
}

Operator faulty_remainder(const FaultyPair& pair) {
  // I - lambda (I + sigma_z)/2 - eta (I + sigma_x)/2
  return affine_qubit(1.0 - pair.lambda / 2.0 - pair.eta / 2.0, -pair.lambda / 2.0, -pair.eta / 2.0);
}

NoGoCertificate sharp_nogo_certificate() {
  const std::array<Operator, 2> p = {unsharp_effect(Axis::z, 1.0, +1), unsharp_effect(Axis::z, 1.0, -1)};
  const std::array<Operator, 2> q = {unsharp_effect(Axis::x, 1.0, +1), unsharp_effect(Axis::x, 1.0, -1)};
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);

  NoGoCertificate cert;
  cert.chain.push_back(
      "M_ab >= 0 with M_a+ + M_a- = P_a forces <v|M_ab|v> = 0 for every v in ker P_a, so "
      "range(M_ab) lies in range(P_a); likewise range(M_ab) lies in range(Q_b)");

  ComplexMatrix forced_sum = ComplexMatrix::Zero(2, 2);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      // ker((1 - P_a) + (1 - Q_b)) = range(P_a) intersect range(Q_b)
      const Operator complement = Operator::positive((2.0 * id - p[a].matrix() - q[b].matrix()));
      const HermitianEigen e = eig_hermitian(complement);
      std::size_t support = 0;
      ComplexMatrix projector = ComplexMatrix::Zero(2, 2);
      for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        if (e.values(k) < 1e-12) {
          ++support;
          projector += e.vectors.col(k) * e.vectors.col(k).adjoint();
        }
      }
      cert.steps.push_back(NoGoStep{outcome_name(a, b), support});
      // Only a trivial intersection pins M_ab; otherwise leave the slot
      // unconstrained (the certificate then reports feasible-unknown).
      if (support > 0) forced_sum += projector * p[a].matrix() * projector;
      cert.chain.push_back(std::string("M_") + outcome_name(a, b) + " supported on a " +
                           std::to_string(support) + "-dimensional intersection" +
                           (support == 0 ? ", hence M_" + std::string(outcome_name(a, b)) + " = 0"
                                         : ""));
    }
  }
  cert.residual = (forced_sum - id).norm();
  cert.infeasible =
      std::all_of(cert.steps.begin(), cert.steps.end(), [](const NoGoStep& s) { return s.support_dim == 0; }) &&
      cert.residual > 1e-9;
  cert.chain.push_back("sum of forced effects differs from identity by Frobenius norm " +
                       std::to_string(cert.residual) + ": contradiction");
  return cert;
}

}  // namespace manycopies::povm
