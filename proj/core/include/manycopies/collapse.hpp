#pragma once

#include <cstddef>
#include <vector>

#include "manycopies/copy_space.hpp"
#include "manycopies/qmath.hpp"

namespace manycopies {

// How the amplitude of L^m_s = alpha sqrt(n_m(s)) |m..m><s| counts copies.
enum class OccupationConvention {
  // n_m = N_m, the number of copies in pointer m. Sum of L^dagger L = N alpha^2.
  pointer_count,
  // Qubits only: n_+- = N +- sum_j s_j (twice the pointer count). Sum of
  // L^dagger L = 2 N alpha^2.
  qubit_signed,
};

// Inter-copy collapse: every basis state |s> is pulled into one of the
// uniform pointer products |m>^N.
class CollapseModel {
 public:
  // `pointer_basis` is a d x d unitary whose columns are the local pointer
  // states; identity means the computational basis.
  CollapseModel(CopySpace space, double alpha, ComplexMatrix pointer_basis,
                OccupationConvention convention);
  // Computational pointer basis; qubits use qubit_signed, qudits pointer_count.
  CollapseModel(CopySpace space, double alpha);

  const CopySpace& space() const noexcept { return space_; }
  double alpha() const noexcept { return alpha_; }
  const ComplexMatrix& pointer_basis() const noexcept { return pointer_basis_; }
  OccupationConvention convention() const noexcept { return convention_; }

  // n_m(s) under the model's convention.
  std::size_t weight(const BasisLabel& label, std::size_t m) const;
  // Sum over all jumps of L^dagger L, which is this scalar times identity.
  double total_decay_rate() const;

  // (U^{(x)N}) mapping pointer-frame coordinates to the computational frame.
  ComplexMatrix pointer_frame(const NumericConfig& config = default_config()) const;

 private:
  CopySpace space_;
  double alpha_;
  ComplexMatrix pointer_basis_;
  OccupationConvention convention_;
};

// alpha sqrt(n) |target><source| with both kets in the pointer frame.
struct RankOneJump {
  std::size_t target;  // flat index of |m>^N
  std::size_t source;  // flat index of |s>
  std::size_t pointer;  // m
  double amplitude;
};

struct CollapseOperatorSet {
  std::vector<RankOneJump> operators;  // zero-amplitude operators removed
  std::size_t total_count = 0;          // d * d^N, including the removed ones
};

// The full family {L^m_s}. Requires a d^N ket to fit the dense cap.
CollapseOperatorSet collapse_lindblads(const CollapseModel& model,
                                       const NumericConfig& config = default_config());

// Dense matrix of one structural jump in the computational frame.
Operator materialize(const RankOneJump& jump, const CollapseModel& model,
                     const NumericConfig& config = default_config());

// gamma P_m^{(j)} for every copy j and pointer m, in copy-major order.
// Projectors are taken along `pointer_basis` columns (identity when empty).
std::vector<Operator> objective_collapse_lindblads(const CopySpace& space, double gamma,
                                                   const ComplexMatrix& pointer_basis = {},
                                                   const NumericConfig& config = default_config());

// rho^{(x)N}.
DensityMatrix product_state(const DensityMatrix& local, const CopySpace& space,
                            const NumericConfig& config = default_config());
// psi^{(x)N} as a ket (only the ket cap applies).
Ket product_ket(const Ket& local, const CopySpace& space,
                const NumericConfig& config = default_config());

// H^{(1)} + ... + H^{(N)} with the same local Hamiltonian on every copy.
Operator copy_hamiltonian(const Operator& local_h, const CopySpace& space,
                          const NumericConfig& config = default_config());

}  // namespace manycopies
