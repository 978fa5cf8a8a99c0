#include "manycopies/sorkin.hpp"

#include <cmath>

#include "manycopies/errors.hpp"

namespace manycopies::experiments {

ThreeStateConfig::ThreeStateConfig(std::array<Complex, 3> amplitudes_, double epsilon_)
    : amplitudes(amplitudes_), epsilon(epsilon_) {
  double norm = 0.0;
  for (const auto& c : amplitudes) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidArgument("amplitudes must be finite");
    norm += std::norm(c);
  }
  if (std::abs(norm - 1.0) > 1e-12) throw InvalidArgument("amplitudes must satisfy sum |c_i|^2 = 1");
  if (!std::isfinite(epsilon)) throw InvalidArgument("epsilon must be finite");
}

SorkinObservables sorkin_observables() {
  static const std::array<std::array<int, 3>, 7> members = {{
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}};
  SorkinObservables out;
  out.labels = {"1", "2", "3", "12", "13", "23", "123"};
  for (std::size_t a = 0; a < 7; ++a) {
    ComplexVector chi(3);
    for (Eigen::Index i = 0; i < 3; ++i) chi(i) = static_cast<double>(members[a][static_cast<std::size_t>(i)]);
    out.ops[a] = Operator::positive(chi * chi.adjoint());
  }
  return out;
}

double sorkin_functional(const ThreeStateConfig& config, int copies) {
  if (copies != 1 && copies != 2) throw InvalidArgument("copies must be 1 or 2");
  ComplexVector psi(3);
  for (Eigen::Index i = 0; i < 3; ++i) psi(i) = config.amplitudes[static_cast<std::size_t>(i)];
  const ComplexMatrix rho = psi * psi.adjoint();
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix rho2 = kron(rho, rho);

  static const std::array<double, 7> signs = {1, 1, 1, -1, -1, -1, 1};
  const SorkinObservables obs = sorkin_observables();
  double total = 0.0;
  for (std::size_t a = 0; a < 7; ++a) {
    const ComplexMatrix& o = obs.ops[a].matrix();
    Complex value;
    if (copies == 1) {
      value = (o * rho).trace();
    } else {
      const ComplexMatrix two = kron(o, id) + kron(id, o) + config.epsilon * kron(o, o);
      value = (two * rho2).trace();
    }
    total += signs[a] * value.real();
  }
  return total;
}

double sorkin_closed_form(const ThreeStateConfig& config) {
  const auto& c = config.amplitudes;
  auto cross = [&](std::size_t i, std::size_t j) { return 2.0 * (c[i] * std::conj(c[j])).real(); };
  const double c12 = cross(0, 1), c13 = cross(0, 2), c23 = cross(1, 2);
  const double a1 = std::norm(c[0]), a2 = std::norm(c[1]), a3 = std::norm(c[2]);
  return config.epsilon *
         (2.0 * a1 * c23 + 2.0 * a2 * c13 + 2.0 * a3 * c12 + 2.0 * (c12 * c13 + c12 * c23 + c13 * c23));
}

}  // namespace manycopies::experiments
