#include "manycopies/sequential.hpp"

#include <cmath>

#include "manycopies/collapse.hpp"
#include "manycopies/dynamics.hpp"

namespace manycopies::experiments {

UnsharpMeasurement::UnsharpMeasurement(double epsilon, Axis axis) : epsilon_(epsilon), axis_(axis) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0,1]");
  for (std::size_t k = 0; k < 2; ++k) {
    const double s = k == 0 ? epsilon : -epsilon;
    effects_[k] = Operator::positive((0.5 * (Operator::identity(2) + s * pauli(axis))).matrix());
    kraus_[k] = sqrt_positive(effects_[k]);
  }
}

double UnsharpMeasurement::completeness_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& k : kraus_) sum += k.matrix().adjoint() * k.matrix();
  return (sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
}

DensityMatrix UnsharpMeasurement::apply(const DensityMatrix& rho, const NumericConfig& config) const {
  if (rho.dim() != 2) throw DimensionMismatch("unsharp measurement acts on a qubit");
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (const auto& k : kraus_) out += k.matrix() * rho.matrix() * k.matrix().adjoint();
  return DensityMatrix(std::move(out), config);
}

double sequential_bound(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0,1]");
  return std::sqrt(1.0 - epsilon * epsilon);
}

double SequentialOutcome::contrast() const { return std::abs(p_plus - p_minus); }

namespace {

Operator z_projector(int sign) { return Operator::projector(Ket::pauli_eigenstate(Axis::z, sign).amplitudes()); }

SequentialOutcome finish(double p_plus, double p_minus, double epsilon) {
  SequentialOutcome out;
  out.p_plus = p_plus;
  out.p_minus = p_minus;
  out.bound = sequential_bound(epsilon);
  out.violated = out.contrast() > out.bound + 1e-9;
  return out;
}

}  // namespace

SequentialOutcome sequential_single_copy(double epsilon, const DensityMatrix& rho0, const NumericConfig& config) {
  const UnsharpMeasurement first(epsilon, Axis::x);
  const DensityMatrix after = first.apply(rho0, config);
  const Operator up = z_projector(+1);
  const Operator down = z_projector(-1);
  return finish(expectation(up, after).real(), expectation(down, after).real(), epsilon);
}

SequentialOutcome sequential_many_copy(double epsilon, std::size_t n_copies, double alpha, double delay,
                                       const NumericConfig& config) {
  if (n_copies < 2) throw InvalidArgument("many-copy sequential run needs N >= 2");
  if (!(delay >= 0.0)) throw InvalidArgument("delay must be >= 0");
  const CopySpace space(n_copies, 2);
  space.require_operator_fits(config);
  const UnsharpMeasurement first(epsilon, Axis::x);

  const DensityMatrix start = product_state(DensityMatrix::pure(Ket::pauli_eigenstate(Axis::z, +1)), space, config);
  ComplexMatrix rho = ComplexMatrix::Zero(start.matrix().rows(), start.matrix().cols());
  for (const auto& k : first.kraus()) {
    const ComplexMatrix big = embed(k, 1, space, config).matrix();
    rho += big * start.matrix() * big.adjoint();
  }
  DensityMatrix state(std::move(rho), config);

  if (delay > 0.0) {
    const CollapseModel model(space, alpha, pauli_eigenbasis(Axis::x), OccupationConvention::qubit_signed);
    const CollapseDynamics dyn(model);
    EvolveOptions options;
    options.record_stride = static_cast<std::size_t>(-1);
    const EvolutionResult result = evolve_structured(dyn, state, delay, recommended_dt(dyn), options, config);
    ComplexMatrix last = result.final_state();
    last = 0.5 * (last + last.adjoint()).eval();
    state = DensityMatrix(std::move(last), config);
  }

  const Operator up = embed(z_projector(+1), 2, space, config);
  const Operator down = embed(z_projector(-1), 2, space, config);
  return finish(expectation(up, state).real(), expectation(down, state).real(), epsilon);
}

}  // namespace manycopies::experiments
