#include "manycopies/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "manycopies/errors.hpp"
#include "rk4.hpp"

namespace manycopies {

double BathModel::coupling(std::int64_t k, int sign) const {
  const auto n = static_cast<double>(space.n_copies());
  const double count = n + (sign > 0 ? 1.0 : -1.0) * static_cast<double>(k);
  return std::sqrt(hbar * alpha * alpha * std::max(count, 0.0) / (2.0 * std::numbers::pi * density_of_states));
}

double BathModel::resonance(std::int64_t k) const {
  const auto n = static_cast<double>(space.n_copies());
  return e_c * (n * n - static_cast<double>(k * k));
}

BathModel bath_from_rate(const CopySpace& space, double alpha, double e_c, std::size_t n_levels,
                         double e_max, double hbar) {
  if (space.local_dim() != 2) throw InvalidArgument("bath model is defined for qubit copies");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(e_c > 0.0)) throw InvalidArgument("E_c must be positive");
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  if (n_levels < 2) throw InvalidArgument("bath needs n_levels >= 2");
  const auto n = static_cast<double>(space.n_copies());
  if (!(e_max > e_c * n * n)) {
    throw InvalidArgument("e_max = " + std::to_string(e_max) + " does not cover the resonance range up to E_c N^2 = " +
                          std::to_string(e_c * n * n));
  }
  BathModel bath{space, alpha, e_c, n_levels, e_max, hbar, static_cast<double>(n_levels) / e_max, {}};
  bath.levels.resize(n_levels);
  for (std::size_t i = 0; i < n_levels; ++i) {
    bath.levels[i] = (static_cast<double>(i) + 0.5) * e_max / static_cast<double>(n_levels);
  }
  return bath;
}

BathModel centered_bath(const CopySpace& space, double alpha, std::int64_t k, std::size_t n_levels,
                        double reference_e_max, std::size_t reference_levels, double hbar) {
  const auto n = static_cast<std::int64_t>(space.n_copies());
  if (std::abs(k) >= n) throw InvalidArgument("centered bath needs |k| < N (pointer states do not decay)");
  if (reference_levels == 0 || !(reference_e_max > 0.0)) throw InvalidArgument("bad reference band");
  const double e_max =
      reference_e_max * std::sqrt(static_cast<double>(n_levels) / static_cast<double>(reference_levels));
  const double e_c = e_max / (2.0 * static_cast<double>(n * n - k * k));
  return bath_from_rate(space, alpha, e_c, n_levels, e_max, hbar);
}

namespace {

// Arrowhead Hamiltonian: diagonal energies plus the |s,0> row/column.
struct Sector {
  double e0;
  double e_pointer;  // -E_c N^2 shift common to both families
  const std::vector<double>* levels;
  double f_plus;
  double f_minus;
  double hbar;
};

void sector_deriv(const Sector& h, const ComplexVector& psi, ComplexVector& out) {
  const auto m = static_cast<Eigen::Index>(h.levels->size());
  const Complex minus_i(0.0, -1.0 / h.hbar);
  const Complex c0 = psi(0);
  Complex acc = h.e0 * c0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double e = (*h.levels)[static_cast<std::size_t>(i)] + h.e_pointer;
    const Complex a = psi(1 + i);
    const Complex b = psi(1 + m + i);
    acc += h.f_plus * a + h.f_minus * b;
    out(1 + i) = minus_i * (e * a + h.f_plus * c0);
    out(1 + m + i) = minus_i * (e * b + h.f_minus * c0);
  }
  out(0) = minus_i * acc;
}

}  // namespace

BathSeries bath_evolve(const BathModel& bath, const BasisLabel& initial, double t_final, double dt,
                       std::size_t record_stride, const NumericConfig& config) {
  const std::size_t dim = 1 + 2 * bath.n_levels;
  if (dim > config.dense_cap) throw CapExceeded("bath sector ket", dim, config.dense_cap);
  if (initial.size() != bath.space.n_copies()) throw DimensionMismatch("initial label length differs from N");
  if (!(t_final >= 0.0)) throw InvalidArgument("final time must be >= 0");

  const std::int64_t k = spin_sum(initial);
  const auto n = static_cast<double>(bath.space.n_copies());
  const Sector h{-bath.e_c * static_cast<double>(k * k), -bath.e_c * n * n, &bath.levels,
                 bath.coupling(k, +1), bath.coupling(k, -1), bath.hbar};

  if (dt <= 0.0) {
    double diag = std::abs(h.e0);
    diag = std::max({diag, std::abs(bath.levels.front() + h.e_pointer), std::abs(bath.levels.back() + h.e_pointer)});
    const double offdiag = std::sqrt(static_cast<double>(bath.n_levels) * (h.f_plus * h.f_plus + h.f_minus * h.f_minus));
    dt = 0.05 * bath.hbar / (diag + offdiag);
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double step_dt = steps == 0 ? dt : t_final / static_cast<double>(steps);
  const std::size_t stride = std::max<std::size_t>(record_stride, 1);

  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  psi(0) = 1.0;
  ComplexVector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
  const auto m = static_cast<Eigen::Index>(bath.n_levels);

  BathSeries series;
  auto record = [&](std::size_t step) {
    series.times.push_back(static_cast<double>(step) * step_dt);
    series.initial.push_back(std::norm(psi(0)));
    series.plus_family.push_back(psi.segment(1, m).squaredNorm());
    series.minus_family.push_back(psi.segment(1 + m, m).squaredNorm());
  };
  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    detail::rk4_step(psi, step_dt, [&h](const ComplexVector& x, ComplexVector& out) { sector_deriv(h, x, out); },
                     k1, k2, k3, k4, tmp);
    series.norm_drift = std::max(series.norm_drift, std::abs(psi.squaredNorm() - 1.0));
    if (series.norm_drift > config.trace_drift_max) {
      throw IntegrationError("bath norm drift " + std::to_string(series.norm_drift) + "; reduce dt");
    }
    if (step % stride == 0 || step == steps) record(step);
  }
  return series;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& survival, double t_max) {
  if (times.size() != survival.size()) throw DimensionMismatch("fit_decay_rate: length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > t_max * (1.0 + 1e-12)) continue;
    if (!(survival[i] > 0.0)) throw InvalidArgument("survival must stay positive inside the fit window");
    const double y = std::log(survival[i]);
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
    ++count;
  }
  if (count < 2) throw InvalidArgument("fit window holds fewer than two samples");
  const double c = static_cast<double>(count);
  const double denom = c * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidArgument("degenerate fit window");
  return -(c * sxy - sx * sy) / denom;
}

BathComparison compare_bath_to_lindblad(const BathModel& bath, const BasisLabel& initial,
                                        const BathComparisonOptions& options, const NumericConfig& config) {
  const CollapseModel model(bath.space, bath.alpha);
  const CollapseDynamics dyn(model);
  const double gamma = model.total_decay_rate();
  const double t_fit = options.fit_lifetimes / gamma;
  const double t_total = std::max(options.total_lifetimes, options.fit_lifetimes) / gamma;

  const BathSeries series = bath_evolve(bath, initial, t_total, options.dt, 1, config);

  // Reference: the same fit applied to the Lindblad survival <s|rho(t)|s>.
  const std::size_t dim = bath.space.dimension();
  const std::size_t s = initial.index(bath.space);
  ComplexMatrix rho0 = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho0(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0;
  const DensityMatrix start(rho0, config);
  const EvolutionResult ref = evolve_structured(dyn, start, t_fit, recommended_dt(dyn), {}, config);
  std::vector<double> ref_survival;
  ref_survival.reserve(ref.states.size());
  for (const auto& r : ref.states) {
    ref_survival.push_back(r(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real());
  }

  BathComparison out;
  out.bath_rate = fit_decay_rate(series.times, series.initial, t_fit);
  out.lindblad_rate = fit_decay_rate(ref.times, ref_survival, t_fit);
  out.rate_error = std::abs(out.bath_rate - out.lindblad_rate) / out.lindblad_rate;

  const double plus = series.plus_family.back();
  const double minus = series.minus_family.back();
  out.bath_branching = plus / (plus + minus);
  const FinalState fin = final_state(dyn, start, {}, config);
  out.lindblad_branching = fin.pointer_weights[0] / (fin.pointer_weights[0] + fin.pointer_weights[1]);
  out.branching_error = std::abs(out.bath_branching - out.lindblad_branching);
  if (out.lindblad_branching > 0.0) out.branching_error /= out.lindblad_branching;

  for (std::size_t i = 0; i < series.times.size(); ++i) {
    if (series.times[i] > t_fit) break;
    out.max_survival_deviation =
        std::max(out.max_survival_deviation, std::abs(series.initial[i] - std::exp(-out.lindblad_rate * series.times[i])));
  }
  return out;
}

}  // namespace manycopies
