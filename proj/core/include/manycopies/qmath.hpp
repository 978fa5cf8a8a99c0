#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "manycopies/config.hpp"
#include "manycopies/copy_space.hpp"
#include "manycopies/errors.hpp"

namespace manycopies {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Axis { x, y, z };

// Dense square complex matrix with validated hermitian / positive flags.
// Immutable once constructed.
class Operator {
 public:
  Operator() = default;

  // Validates squareness, finiteness and every flag that is requested.
  explicit Operator(ComplexMatrix matrix, bool hermitian = false, bool positive = false,
                    const NumericConfig& config = default_config());

  static Operator hermitian(ComplexMatrix matrix, const NumericConfig& config = default_config());
  static Operator positive(ComplexMatrix matrix, const NumericConfig& config = default_config());
  static Operator identity(std::size_t dim);
  // |psi><psi| for an arbitrary (not necessarily normalized) vector.
  static Operator projector(const ComplexVector& psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  bool is_hermitian() const noexcept { return hermitian_; }
  bool is_positive() const noexcept { return positive_; }

  Operator adjoint() const;
  Complex trace() const { return matrix_.trace(); }

  // Flags propagate: sums keep shared flags, non-negative real scaling keeps
  // positivity, real scaling keeps hermiticity. Products drop both.
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(double s, const Operator& a);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  struct Unchecked {};
  Operator(Unchecked, ComplexMatrix matrix, bool hermitian, bool positive)
      : matrix_(std::move(matrix)), hermitian_(hermitian), positive_(positive) {}

  ComplexMatrix matrix_;
  bool hermitian_ = false;
  bool positive_ = false;
};

// Normalized (unless constructed raw) state vector.
class Ket {
 public:
  Ket() = default;
  // Requires ||psi|| = 1 within norm_tol.
  explicit Ket(ComplexVector amplitudes, const NumericConfig& config = default_config());

  // Rescales to unit norm; throws InvalidArgument for the zero vector.
  static Ket normalized(ComplexVector amplitudes);
  static Ket basis(std::size_t dim, std::size_t index);
  // Eigenstate of the Pauli matrix along `axis` with eigenvalue +1 (sign > 0) or -1.
  static Ket pauli_eigenstate(Axis axis, int sign);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  ComplexVector amplitudes_;
};

// Trace-one positive semidefinite operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix matrix, const NumericConfig& config = default_config());

  static DensityMatrix pure(const Ket& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const Operator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  std::size_t dim() const noexcept { return op_.dim(); }

  double purity() const;
  // <i|rho|i> as a real vector.
  RealVector populations() const;

 private:
  Operator op_;
};

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are orthonormal eigenvectors
};

Operator pauli(Axis axis);

// Kronecker product in sequence order. Throws CapExceeded when the result
// would hold more than dense_cap entries.
Operator tensor(std::span<const Operator> ops, const NumericConfig& config = default_config());
Operator tensor(std::initializer_list<Operator> ops, const NumericConfig& config = default_config());
// Plain Kronecker product of raw vectors / matrices (no cap, no flags).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// Requires the hermitian flag. Throws ConvergenceError if the solver fails
// or the eigen-residual exceeds eig_residual_tol.
HermitianEigen eig_hermitian(const Operator& a, const NumericConfig& config = default_config());

double min_eigenvalue(const ComplexMatrix& hermitian_matrix);

// Tr(M rho).
Complex expectation(const Operator& m, const DensityMatrix& rho);

// 1 (x) ... (x) A (x) ... (x) 1 with A at 1-based slot `copy_index`.
Operator embed(const Operator& local, std::size_t copy_index, const CopySpace& space,
               const NumericConfig& config = default_config());

// f applied to the spectrum of a hermitian operator: V f(Lambda) V^dagger.
ComplexMatrix hermitian_function(const Operator& a, const std::function<Complex(double)>& f);
// Principal square root of a positive operator (negative round-off clipped to zero).
Operator sqrt_positive(const Operator& a);
// exp(-i H t / hbar).
ComplexMatrix unitary_propagator(const Operator& h, double t, double hbar = 1.0);

// d x d unitary whose columns are the eigenstates of the Pauli matrix along
// `axis`, ordered +1 then -1. Axis::z gives the identity.
ComplexMatrix pauli_eigenbasis(Axis axis);

// Largest |a_ij - conj(a_ji)|.
double hermiticity_defect(const ComplexMatrix& a);

}  // namespace manycopies
