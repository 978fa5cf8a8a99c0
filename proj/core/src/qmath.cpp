#include "manycopies/qmath.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace manycopies {

namespace {

void require_square_finite(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("operator matrix must be square and non-empty, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvariantViolation("operator matrix has non-finite entries");
  }
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& hermitian_matrix) {
  const ComplexMatrix sym = 0.5 * (hermitian_matrix + hermitian_matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalue solver did not converge");
  }
  return solver.eigenvalues()(0);
}

Operator::Operator(ComplexMatrix matrix, bool hermitian, bool positive, const NumericConfig& config)
    : matrix_(std::move(matrix)), hermitian_(hermitian || positive), positive_(positive) {
  require_square_finite(matrix_);
  if (hermitian_) {
    const double defect = hermiticity_defect(matrix_);
    if (defect > config.hermitian_tol) {
      throw InvariantViolation("hermitian flag set but ||A - A^dagger|| = " +
                               std::to_string(defect));
    }
  }
  if (positive_) {
    const double lo = min_eigenvalue(matrix_);
    if (lo < -config.positive_tol) {
      throw InvariantViolation("positive flag set but min eigenvalue = " + std::to_string(lo));
    }
  }
}

Operator Operator::hermitian(ComplexMatrix matrix, const NumericConfig& config) {
  return Operator(std::move(matrix), true, false, config);
}

Operator Operator::positive(ComplexMatrix matrix, const NumericConfig& config) {
  return Operator(std::move(matrix), true, true, config);
}

Operator Operator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator(Unchecked{}, ComplexMatrix::Identity(n, n), true, true);
}

Operator Operator::projector(const ComplexVector& psi) {
  return Operator(Unchecked{}, psi * psi.adjoint(), true, true);
}

Operator Operator::adjoint() const {
  return Operator(Unchecked{}, matrix_.adjoint(), hermitian_, positive_);
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator sum: dimensions differ");
  return Operator(Operator::Unchecked{}, a.matrix_ + b.matrix_, a.hermitian_ && b.hermitian_,
                  a.positive_ && b.positive_);
}

Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator difference: dimensions differ");
  return Operator(Operator::Unchecked{}, a.matrix_ - b.matrix_, a.hermitian_ && b.hermitian_,
                  false);
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator product: dimensions differ");
  return Operator(Operator::Unchecked{}, a.matrix_ * b.matrix_, false, false);
}

Operator operator*(double s, const Operator& a) {
  return Operator(Operator::Unchecked{}, s * a.matrix_, a.hermitian_, a.positive_ && s >= 0.0);
}

Operator operator*(Complex s, const Operator& a) {
  const bool real = s.imag() == 0.0;
  return Operator(Operator::Unchecked{}, s * a.matrix_, a.hermitian_ && real,
                  a.positive_ && real && s.real() >= 0.0);
}

Ket::Ket(ComplexVector amplitudes, const NumericConfig& config) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidArgument("ket must be non-empty");
  if (!amplitudes_.allFinite()) throw InvariantViolation("ket has non-finite amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > config.norm_tol) {
    throw InvariantViolation("ket norm " + std::to_string(norm) + " is not 1");
  }
}

Ket Ket::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  Ket k;
  k.amplitudes_ = amplitudes / norm;
  return k;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  Ket k;
  k.amplitudes_ = std::move(v);
  return k;
}

Ket Ket::pauli_eigenstate(Axis axis, int sign) {
  const ComplexMatrix basis = pauli_eigenbasis(axis);
  Ket k;
  k.amplitudes_ = basis.col(sign > 0 ? 0 : 1);
  return k;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, const NumericConfig& config) {
  require_square_finite(matrix);
  const Complex tr = matrix.trace();
  if (std::abs(tr.imag()) > config.trace_tol || std::abs(tr.real() - 1.0) > config.trace_tol) {
    throw InvariantViolation("density matrix trace is " + std::to_string(tr.real()) + " + " +
                             std::to_string(tr.imag()) + "i, expected 1");
  }
  op_ = Operator(std::move(matrix), true, true, config);
}

DensityMatrix DensityMatrix::pure(const Ket& psi) {
  DensityMatrix rho;
  rho.op_ = Operator::projector(psi.amplitudes());
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  DensityMatrix rho;
  rho.op_ = (1.0 / static_cast<double>(dim)) * Operator::identity(dim);
  return rho;
}

double DensityMatrix::purity() const {
  return (matrix() * matrix()).trace().real();
}

RealVector DensityMatrix::populations() const {
  return matrix().diagonal().real();
}

Operator pauli(Axis axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case Axis::x:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
      break;
    case Axis::z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return Operator::hermitian(std::move(m));
}

ComplexMatrix pauli_eigenbasis(Axis axis) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix u(2, 2);
  switch (axis) {
    case Axis::x:
      u << r, r, r, -r;
      break;
    case Axis::y:
      u << r, r, Complex(0.0, r), Complex(0.0, -r);
      break;
    case Axis::z:
      u = ComplexMatrix::Identity(2, 2);
      break;
  }
  return u;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Operator tensor(std::span<const Operator> ops, const NumericConfig& config) {
  if (ops.empty()) throw InvalidArgument("tensor of an empty sequence");
  std::size_t dim = 1;
  for (const auto& op : ops) dim = checked_mul(dim, op.dim());
  const std::size_t entries = checked_mul(dim, dim);
  if (entries > config.dense_cap) throw CapExceeded("tensor product", entries, config.dense_cap);

  ComplexMatrix out = ops.front().matrix();
  bool hermitian = ops.front().is_hermitian();
  bool positive = ops.front().is_positive();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    out = kron(out, ops[i].matrix());
    hermitian = hermitian && ops[i].is_hermitian();
    positive = positive && ops[i].is_positive();
  }
  return Operator(std::move(out), hermitian, positive, config);
}

Operator tensor(std::initializer_list<Operator> ops, const NumericConfig& config) {
  return tensor(std::span<const Operator>(ops.begin(), ops.size()), config);
}

HermitianEigen eig_hermitian(const Operator& a, const NumericConfig& config) {
  if (!a.is_hermitian()) throw InvalidArgument("eig_hermitian requires the hermitian flag");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian eigensolver did not converge (dim " +
                           std::to_string(a.dim()) + ")");
  }
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
  const ComplexMatrix residual =
      a.matrix() * out.vectors - out.vectors * out.values.cast<Complex>().asDiagonal();
  const double worst = residual.cwiseAbs().maxCoeff();
  if (worst > config.eig_residual_tol * scale) {
    throw ConvergenceError("eigen-residual " + std::to_string(worst) + " exceeds tolerance");
  }
  return out;
}

Complex expectation(const Operator& m, const DensityMatrix& rho) {
  if (m.dim() != rho.dim()) {
    throw DimensionMismatch("expectation: operator dim " + std::to_string(m.dim()) +
                            " vs state dim " + std::to_string(rho.dim()));
  }
  // Tr(M rho) = sum_ij M_ij rho_ji
  return (m.matrix().array() * rho.matrix().transpose().array()).sum();
}

Operator embed(const Operator& local, std::size_t copy_index, const CopySpace& space,
               const NumericConfig& config) {
  if (local.dim() != space.local_dim()) {
    throw DimensionMismatch("embed: local operator dim " + std::to_string(local.dim()) +
                            " vs copy local dim " + std::to_string(space.local_dim()));
  }
  if (copy_index < 1 || copy_index > space.n_copies()) {
    throw InvalidArgument("embed: copy index " + std::to_string(copy_index) + " outside 1.." +
                          std::to_string(space.n_copies()));
  }
  space.require_operator_fits(config);
  std::vector<Operator> factors(space.n_copies(), Operator::identity(space.local_dim()));
  factors[copy_index - 1] = local;
  return tensor(std::span<const Operator>(factors), config);
}

ComplexMatrix hermitian_function(const Operator& a, const std::function<Complex(double)>& f) {
  const HermitianEigen e = eig_hermitian(a);
  ComplexVector fl(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fl(i) = f(e.values(i));
  return e.vectors * fl.asDiagonal() * e.vectors.adjoint();
}

Operator sqrt_positive(const Operator& a) {
  if (!a.is_positive()) throw InvalidArgument("sqrt_positive requires the positive flag");
  ComplexMatrix root =
      hermitian_function(a, [](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
  root = 0.5 * (root + root.adjoint());
  return Operator::positive(std::move(root));
}

ComplexMatrix unitary_propagator(const Operator& h, double t, double hbar) {
  return hermitian_function(h, [t, hbar](double e) { return std::exp(Complex(0.0, -e * t / hbar)); });
}

}  // namespace manycopies
