#include "manycopies/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "manycopies/errors.hpp"

namespace manycopies::experiments {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectrum spectrum(const std::vector<double>& signal, double sample_dt, Window window, std::size_t pad_factor,
                  double t_start) {
  if (signal.size() < 16) throw InvalidArgument("spectrum needs at least 16 samples");
  if (!(sample_dt > 0.0)) throw InvalidArgument("sample dt must be positive");
  if (pad_factor < 1) throw InvalidArgument("pad factor must be >= 1");
  for (double x : signal) {
    if (!std::isfinite(x)) throw InvalidArgument("signal contains non-finite samples");
  }

  const std::size_t n = signal.size();
  const std::size_t len = n * pad_factor;
  const std::size_t bins = len / 2 + 1;

  double* in = fftw_alloc_real(len);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < len; ++i) {
    double w = 1.0;
    if (i >= n) {
      w = 0.0;
    } else if (window == Window::hann) {
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    in[i] = i < n ? w * signal[i] : 0.0;
  }
  fftw_execute(plan);

  Spectrum s;
  s.window = window;
  s.sample_dt = sample_dt;
  s.n_samples = n;
  s.transform_length = len;
  s.frequencies.resize(bins);
  s.values.resize(bins);
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(len) * sample_dt);
  for (std::size_t k = 0; k < bins; ++k) {
    const double omega = d_omega * static_cast<double>(k);
    // r2c uses e^{-i...}; the real input makes X(+Omega) the conjugate.
    const Complex forward(out[k][0], -out[k][1]);
    s.frequencies[k] = omega;
    s.values[k] = forward * sample_dt * std::exp(Complex(0.0, omega * t_start));
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, double relative_floor) {
  std::vector<Peak> peaks;
  const std::size_t n = s.values.size();
  if (n == 0) return peaks;
  double top = 0.0;
  for (const auto& v : s.values) top = std::max(top, std::abs(v));
  const double floor = relative_floor * top;
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(s.values[k]);
    if (mag < floor || mag == 0.0) continue;
    const bool left_ok = k == 0 || mag >= std::abs(s.values[k - 1]);
    const bool right_ok = k + 1 == n || mag > std::abs(s.values[k + 1]);
    if (left_ok && right_ok) peaks.push_back(Peak{k, s.frequencies[k], mag, s.values[k]});
  }
  return peaks;
}

Peak real_peak(const Spectrum& s, double lo, double hi) {
  Peak best;
  bool found = false;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (s.frequencies[k] < lo || s.frequencies[k] > hi) continue;
    if (!found || s.values[k].real() > best.value.real()) {
      best = {k, s.frequencies[k], std::abs(s.values[k]), s.values[k]};
      found = true;
    }
  }
  if (!found) throw InvalidArgument("no frequency in the requested range");
  return best;
}

double half_width(const Spectrum& s, const Peak& peak) {
  const double half = 0.5 * s.values[peak.index].real();
  if (!(half > 0.0)) throw InvalidArgument("peak has non-positive real part");
  auto crossing = [&](long dir) {
    long k = static_cast<long>(peak.index);
    while (true) {
      const long next = k + dir;
      if (next < 0 || next >= static_cast<long>(s.values.size())) {
        throw InvalidArgument("real part never falls to half maximum");
      }
      const double a = s.values[static_cast<std::size_t>(k)].real();
      const double b = s.values[static_cast<std::size_t>(next)].real();
      if (b <= half) {
        const double fa = s.frequencies[static_cast<std::size_t>(k)];
        const double fb = s.frequencies[static_cast<std::size_t>(next)];
        return fa + (half - a) / (b - a) * (fb - fa);
      }
      k = next;
    }
  };
  return 0.5 * (crossing(+1) - crossing(-1));
}

std::size_t nearest_bin(const Spectrum& s, double omega) {
  if (s.frequencies.empty()) throw InvalidArgument("empty spectrum");
  const double r = s.resolution();
  const auto k = static_cast<long>(std::lround(omega / r));
  return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(s.frequencies.size()) - 1));
}

}  // namespace manycopies::experiments
