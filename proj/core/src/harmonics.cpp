#include "manycopies/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "manycopies/collapse.hpp"
#include "manycopies/errors.hpp"
#include "manycopies/qmath.hpp"

namespace manycopies::experiments {

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

double evaluate(const std::map<int, double>& xi, double phase) {
  const double c2 = std::cos(phase) * std::cos(phase);
  double p = 0.0;
  for (const auto& [m, coeff] : xi) p += coeff * std::pow(c2, m);
  return p;
}

}  // namespace

HarmonicModel::HarmonicModel(double omega, std::map<int, double> xi, double jitter_sigma)
    : omega_(omega), xi_(std::move(xi)), jitter_sigma_(jitter_sigma) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be positive");
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) throw InvalidArgument("jitter sigma must be >= 0");
  if (xi_.empty()) throw InvalidArgument("xi needs at least one coefficient");
  for (const auto& [m, coeff] : xi_) {
    if (m < 1) throw InvalidArgument("harmonic index m must be >= 1");
    if (!std::isfinite(coeff)) throw InvalidArgument("xi coefficients must be finite");
  }
  constexpr int grid = 4096;
  for (int i = 0; i <= grid; ++i) {
    const double phase = std::numbers::pi * static_cast<double>(i) / grid;
    const double p = evaluate(xi_, phase);
    if (p < -1e-12 || p > 1.0 + 1e-12) {
      throw InvalidArgument("p_t = " + std::to_string(p) + " leaves [0,1] at omega t = " + std::to_string(phase));
    }
  }
}

int HarmonicModel::max_harmonic() const {
  int top = 0;
  for (const auto& [m, coeff] : xi_) {
    if (coeff != 0.0) top = std::max(top, m);
  }
  return top;
}

double born_probability(const HarmonicModel& model, double t) { return evaluate(model.xi(), model.omega() * t); }

std::vector<double> harmonic_amplitudes(const HarmonicModel& model) {
  // cos^{2m} x = 4^{-m} [binom(2m, m) + 2 sum_{k=1}^m binom(2m, m-k) cos(2kx)]
  std::vector<double> a(static_cast<std::size_t>(model.max_harmonic()) + 1, 0.0);
  for (const auto& [m, coeff] : model.xi()) {
    const double scale = coeff / std::pow(4.0, m);
    a[0] += scale * binomial(2 * m, m);
    for (int k = 1; k <= m && static_cast<std::size_t>(k) < a.size(); ++k) {
      a[static_cast<std::size_t>(k)] += 2.0 * scale * binomial(2 * m, m - k);
    }
  }
  return a;
}

double period_mean(const HarmonicModel& model) { return harmonic_amplitudes(model)[0]; }

double multi_copy_projection_probability(std::size_t m, double omega, double t, std::size_t n_copies,
                                         const NumericConfig& config) {
  if (m < 1 || m > n_copies) throw InvalidArgument("need 1 <= m <= n_copies");
  const CopySpace space(n_copies, 2);
  space.require_operator_fits(config);
  const Operator h = copy_hamiltonian(omega * pauli(Axis::x), space, config);
  const Ket start = product_ket(Ket::pauli_eigenstate(Axis::z, +1), space, config);
  const ComplexVector psi = unitary_propagator(h, t) * start.amplitudes();

  const Operator up = Operator::projector(Ket::pauli_eigenstate(Axis::z, +1).amplitudes());
  ComplexVector projected = psi;
  for (std::size_t j = 1; j <= m; ++j) projected = embed(up, j, space, config).matrix() * projected;
  return psi.dot(projected).real();
}

std::vector<double> jittered_signal(const HarmonicModel& model, const std::vector<double>& t0_grid) {
  std::vector<double> out(t0_grid.size());
  if (t0_grid.empty()) return out;
  double step = 0.0;
  if (t0_grid.size() > 1) {
    step = t0_grid[1] - t0_grid[0];
    if (!(step > 0.0)) throw InvalidArgument("t0 grid must be increasing");
    for (std::size_t i = 2; i < t0_grid.size(); ++i) {
      const double expected = t0_grid[0] + static_cast<double>(i) * step;
      if (std::abs(t0_grid[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        throw InvalidArgument("t0 grid must be uniform");
      }
    }
    if (model.omega() * step > 0.3) {
      throw InvalidArgument("grid too coarse: omega * dt0 = " + std::to_string(model.omega() * step) + " > 0.3");
    }
  }

  const double sigma = model.jitter_sigma();
  if (sigma == 0.0 || step == 0.0) {
    for (std::size_t i = 0; i < t0_grid.size(); ++i) out[i] = born_probability(model, t0_grid[i]);
    return out;
  }
  const auto taps = static_cast<long>(std::floor(5.0 * sigma / step));
  std::vector<double> kernel(static_cast<std::size_t>(2 * taps + 1));
  double norm = 0.0;
  for (long k = -taps; k <= taps; ++k) {
    const double x = static_cast<double>(k) * step / sigma;
    kernel[static_cast<std::size_t>(k + taps)] = std::exp(-0.5 * x * x);
    norm += kernel[static_cast<std::size_t>(k + taps)];
  }
  for (auto& w : kernel) w /= norm;
  for (std::size_t i = 0; i < t0_grid.size(); ++i) {
    double acc = 0.0;
    for (long k = -taps; k <= taps; ++k) {
      acc += kernel[static_cast<std::size_t>(k + taps)] *
             born_probability(model, t0_grid[i] - static_cast<double>(k) * step);
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace manycopies::experiments
