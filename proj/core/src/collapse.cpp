#include "manycopies/collapse.hpp"

#include <cmath>
#include <string>

namespace manycopies {

namespace {

void require_unitary(const ComplexMatrix& u, std::size_t d) {
  if (static_cast<std::size_t>(u.rows()) != d || u.rows() != u.cols()) {
    throw DimensionMismatch("pointer basis must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  const double defect =
      (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw InvariantViolation("pointer basis is not unitary");
}

}  // namespace

CollapseModel::CollapseModel(CopySpace space, double alpha, ComplexMatrix pointer_basis,
                             OccupationConvention convention)
    : space_(space), alpha_(alpha), pointer_basis_(std::move(pointer_basis)), convention_(convention) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("collapse amplitude alpha must be positive and finite");
  }
  require_unitary(pointer_basis_, space_.local_dim());
  if (convention_ == OccupationConvention::qubit_signed && space_.local_dim() != 2) {
    throw InvalidArgument("qubit_signed convention requires local dimension 2");
  }
}

CollapseModel::CollapseModel(CopySpace space, double alpha)
    : CollapseModel(space, alpha,
                    ComplexMatrix::Identity(static_cast<Eigen::Index>(space.local_dim()),
                                            static_cast<Eigen::Index>(space.local_dim())),
                    space.local_dim() == 2 ? OccupationConvention::qubit_signed
                                           : OccupationConvention::pointer_count) {}

std::size_t CollapseModel::weight(const BasisLabel& label, std::size_t m) const {
  return convention_ == OccupationConvention::qubit_signed ? signed_occupation(label, m)
                                                           : occupation(label, m);
}

double CollapseModel::total_decay_rate() const {
  const double n = static_cast<double>(space_.n_copies());
  const double factor = convention_ == OccupationConvention::qubit_signed ? 2.0 : 1.0;
  return factor * n * alpha_ * alpha_;
}

ComplexMatrix CollapseModel::pointer_frame(const NumericConfig& config) const {
  space_.require_operator_fits(config);
  ComplexMatrix w = pointer_basis_;
  for (std::size_t j = 1; j < space_.n_copies(); ++j) w = kron(w, pointer_basis_);
  return w;
}

CollapseOperatorSet collapse_lindblads(const CollapseModel& model, const NumericConfig& config) {
  const CopySpace& space = model.space();
  space.require_ket_fits(config);
  const std::size_t dim = space.dimension();
  const std::size_t d = space.local_dim();

  CollapseOperatorSet set;
  set.total_count = d * dim;
  set.operators.reserve(set.total_count);
  for (std::size_t src = 0; src < dim; ++src) {
    const BasisLabel label = BasisLabel::from_index(space, src);
    for (std::size_t m = 0; m < d; ++m) {
      const std::size_t n = model.weight(label, m);
      if (n == 0) continue;
      set.operators.push_back(RankOneJump{pointer_index(space, m), src, m,
                                          model.alpha() * std::sqrt(static_cast<double>(n))});
    }
  }
  return set;
}

Operator materialize(const RankOneJump& jump, const CollapseModel& model, const NumericConfig& config) {
  const ComplexMatrix w = model.pointer_frame(config);
  const auto t = static_cast<Eigen::Index>(jump.target);
  const auto s = static_cast<Eigen::Index>(jump.source);
  ComplexMatrix l = jump.amplitude * (w.col(t) * w.col(s).adjoint());
  return Operator(std::move(l), false, false, config);
}

std::vector<Operator> objective_collapse_lindblads(const CopySpace& space, double gamma,
                                                   const ComplexMatrix& pointer_basis,
                                                   const NumericConfig& config) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("objective collapse rate gamma must be non-negative");
  }
  const auto d = static_cast<Eigen::Index>(space.local_dim());
  const ComplexMatrix basis =
      pointer_basis.size() == 0 ? ComplexMatrix(ComplexMatrix::Identity(d, d)) : pointer_basis;
  require_unitary(basis, space.local_dim());
  space.require_operator_fits(config);

  std::vector<Operator> out;
  out.reserve(space.n_copies() * space.local_dim());
  for (std::size_t j = 1; j <= space.n_copies(); ++j) {
    for (Eigen::Index m = 0; m < d; ++m) {
      const Operator local = gamma * Operator::projector(basis.col(m));
      out.push_back(embed(local, j, space, config));
    }
  }
  return out;
}

DensityMatrix product_state(const DensityMatrix& local, const CopySpace& space,
                            const NumericConfig& config) {
  if (local.dim() != space.local_dim()) {
    throw DimensionMismatch("product_state: local state dim differs from copy local dim");
  }
  space.require_operator_fits(config);
  ComplexMatrix rho = local.matrix();
  for (std::size_t j = 1; j < space.n_copies(); ++j) rho = kron(rho, local.matrix());
  return DensityMatrix(std::move(rho), config);
}

Ket product_ket(const Ket& local, const CopySpace& space, const NumericConfig& config) {
  if (local.dim() != space.local_dim()) {
    throw DimensionMismatch("product_ket: local ket dim differs from copy local dim");
  }
  space.require_ket_fits(config);
  ComplexVector psi = local.amplitudes();
  for (std::size_t j = 1; j < space.n_copies(); ++j) psi = kron(psi, local.amplitudes());
  return Ket::normalized(std::move(psi));
}

Operator copy_hamiltonian(const Operator& local_h, const CopySpace& space, const NumericConfig& config) {
  if (!local_h.is_hermitian()) throw InvalidArgument("copy_hamiltonian requires a hermitian local H");
  Operator total = embed(local_h, 1, space, config);
  for (std::size_t j = 2; j <= space.n_copies(); ++j) total = total + embed(local_h, j, space, config);
  return total;
}

}  // namespace manycopies
