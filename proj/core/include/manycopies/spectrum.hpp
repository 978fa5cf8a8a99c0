#pragma once

#include <cstddef>
#include <vector>

#include "manycopies/qmath.hpp"

namespace manycopies::experiments {

enum class Window { rectangular, hann };

// X(Omega) ~ integral dt x(t) e^{i Omega t}, sampled at Omega_k = 2 pi k / (L dt)
// for k = 0..L/2 where L is the (padded) transform length.
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<Complex> values;
  Window window = Window::rectangular;
  double sample_dt = 0.0;
  std::size_t n_samples = 0;
  std::size_t transform_length = 0;

  double resolution() const { return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0; }
};

// Requires at least 16 samples. `pad_factor` >= 1 zero-pads to
// pad_factor * n samples (interpolates the frequency grid). Samples are
// taken at t_n = t_start + n dt.
Spectrum spectrum(const std::vector<double>& signal, double sample_dt, Window window = Window::rectangular,
                  std::size_t pad_factor = 1, double t_start = 0.0);

struct Peak {
  std::size_t index = 0;
  double frequency = 0.0;
  double magnitude = 0.0;  // |X|
  Complex value;
};

// Local maxima of |X| (endpoints included) with |X| >= relative_floor * max|X|,
// ordered by frequency.
std::vector<Peak> find_peaks(const Spectrum& s, double relative_floor);

// Largest Re X with frequency in [lo, hi]; the absorptive peak of a damped
// oscillation. Throws InvalidArgument if no grid point lies in the range.
Peak real_peak(const Spectrum& s, double lo, double hi);

// Half width at half maximum of Re X around a peak, by linear interpolation
// on both sides. Throws InvalidArgument if either side never drops to half.
double half_width(const Spectrum& s, const Peak& peak);

// Index of the grid frequency closest to omega.
std::size_t nearest_bin(const Spectrum& s, double omega);

}  // namespace manycopies::experiments
