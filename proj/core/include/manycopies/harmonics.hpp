#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "manycopies/config.hpp"

namespace manycopies::experiments {

// p_t = sum_m xi_m cos^{2m}(omega t), observed through Gaussian timing jitter.
class HarmonicModel {
 public:
  // Throws InvalidArgument unless omega > 0, jitter_sigma >= 0, every key
  // m >= 1 and p_t stays in [0,1] on a fine grid over one period.
  HarmonicModel(double omega, std::map<int, double> xi, double jitter_sigma = 0.0);

  double omega() const noexcept { return omega_; }
  const std::map<int, double>& xi() const noexcept { return xi_; }
  double jitter_sigma() const noexcept { return jitter_sigma_; }
  // Largest m with xi_m != 0.
  int max_harmonic() const;

 private:
  double omega_;
  std::map<int, double> xi_;
  double jitter_sigma_;
};

double born_probability(const HarmonicModel& model, double t);

// Cosine-series coefficients: p_t = sum_k a_k cos(2 k omega t), k = 0..max_harmonic.
std::vector<double> harmonic_amplitudes(const HarmonicModel& model);

// Average of p_t over one period: sum_m xi_m binom(2m, m) / 4^m.
double period_mean(const HarmonicModel& model);

// Probability that the first m of n_copies copies all pass |+><+| after each
// copy evolved from |+> under omega sigma_x for time t; equals cos^{2m}(omega t).
// Dense ket evaluation.
double multi_copy_projection_probability(std::size_t m, double omega, double t, std::size_t n_copies,
                                         const NumericConfig& config = default_config());

// Gaussian-jitter convolution on a uniform t0 grid: each output is the
// normalized kernel (truncated at 5 sigma, taps spaced by the grid step)
// applied to p evaluated at t0 - k dt. Throws InvalidArgument when
// omega * dt > 0.3 or the grid is not uniform.
std::vector<double> jittered_signal(const HarmonicModel& model, const std::vector<double>& t0_grid);

}  // namespace manycopies::experiments
