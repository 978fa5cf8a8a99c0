#include "doctest.h"
#include "oracles.hpp"

#include "manycopies/harmonics.hpp"
#include "manycopies/sequential.hpp"
#include "manycopies/sorkin.hpp"
#include "manycopies/spectrum.hpp"

using namespace manycopies;
using namespace manycopies::experiments;

// ---- sequential -----------------------------------------------------------

TEST_CASE("unsharp measurement is a valid instrument") {
  for (double e : {0.0, 0.3, 0.99, 1.0}) {
    const UnsharpMeasurement m(e, Axis::x);
    CHECK(m.completeness_defect() < 1e-14);
    for (int k = 0; k < 2; ++k) {
      const ComplexMatrix kk = m.kraus()[k].matrix();
      CHECK(oracle::max_abs(kk * kk - m.effects()[k].matrix()) < 1e-12);
    }
  }
  CHECK_THROWS(UnsharpMeasurement(1.1, Axis::x));
}

TEST_CASE("single-copy sequential pipeline matches the Bloch oracle") {
  oracle::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const double eps = rng.uniform();
    const DensityMatrix rho(rng.density(2));
    const auto out = sequential_single_copy(eps, rho);
    const auto [pp, pm] = oracle::sequential_probabilities(eps, rho.matrix());
    CHECK(out.p_plus == doctest::Approx(pp).epsilon(1e-12));
    CHECK(out.p_minus == doctest::Approx(pm).epsilon(1e-12));
    CHECK_FALSE(out.violated);
  }
  CHECK(sequential_bound(0.6) == doctest::Approx(0.8));
}

TEST_CASE("many-copy sequential run") {
  const auto zero = sequential_many_copy(0.5, 2, 0.5, 0.0);
  CHECK(zero.contrast() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zero.violated);
  // Long delay: the collapse copies copy 1's x record to copy 2, so the
  // z-contrast of copy 2 vanishes.
  const auto late = sequential_many_copy(0.5, 2, 0.5, 40.0);
  CHECK(late.contrast() < 1e-6);
  CHECK_FALSE(late.violated);
  CHECK_THROWS(sequential_many_copy(0.5, 1, 0.5, 0.0));
}

// ---- harmonics ------------------------------------------------------------

TEST_CASE("harmonic model validation") {
  CHECK_THROWS(HarmonicModel(0.0, {{1, 1.0}}));
  CHECK_THROWS(HarmonicModel(1.0, {{0, 1.0}}));
  CHECK_THROWS(HarmonicModel(1.0, {{1, 1.0}, {2, 0.1}}));  // exceeds 1 at t = 0
  CHECK_THROWS(HarmonicModel(1.0, {{1, 1.0}}, -0.1));
  CHECK_NOTHROW(HarmonicModel(1.0, {{1, 0.9}, {2, 0.1}}));
  CHECK(HarmonicModel(1.0, {{1, 0.9}, {3, 0.1}}).max_harmonic() == 3);
}

TEST_CASE("harmonic amplitudes reproduce the signal") {
  const HarmonicModel m(1.3, {{1, 0.5}, {2, 0.3}, {4, 0.2}});
  const auto a = harmonic_amplitudes(m);
  REQUIRE(a.size() == 5);
  for (double t : {0.0, 0.21, 1.7, 4.4}) {
    double direct = 0.5 * std::pow(std::cos(1.3 * t), 2) + 0.3 * std::pow(std::cos(1.3 * t), 4) +
                    0.2 * std::pow(std::cos(1.3 * t), 8);
    double series = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) series += a[k] * std::cos(2.0 * double(k) * 1.3 * t);
    CHECK(born_probability(m, t) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(series == doctest::Approx(direct).epsilon(1e-13));
  }
  const double mean = 0.5 * oracle::cos_power_mean(1) + 0.3 * oracle::cos_power_mean(2) + 0.2 * oracle::cos_power_mean(4);
  CHECK(period_mean(m) == doctest::Approx(mean).epsilon(1e-9));
  CHECK(a[0] == doctest::Approx(period_mean(m)).epsilon(1e-14));
  // Only the first harmonic keeps xi_m / 4 of the top term.
  const HarmonicModel single(1.0, {{1, 1.0}});
  CHECK(harmonic_amplitudes(single)[1] / 2.0 == doctest::Approx(0.25));
}

TEST_CASE("multi-copy projection probability") {
  for (std::size_t m : {1u, 2u, 3u}) {
    for (double t : {0.0, 0.4, 1.1}) {
      CHECK(multi_copy_projection_probability(m, 0.8, t, 3) ==
            doctest::Approx(std::pow(std::cos(0.8 * t), 2.0 * double(m))).epsilon(1e-12));
    }
  }
  CHECK_THROWS(multi_copy_projection_probability(4, 0.8, 0.1, 3));
}

TEST_CASE("jitter averages the signal") {
  const HarmonicModel sharp(1.0, {{1, 1.0}});
  const HarmonicModel blurred(1.0, {{1, 1.0}}, 0.3);
  std::vector<double> grid;
  for (int i = 0; i < 2000; ++i) grid.push_back(0.01 * i);
  const auto s0 = jittered_signal(sharp, grid);
  const auto s1 = jittered_signal(blurred, grid);
  for (std::size_t i = 0; i < grid.size(); i += 97) CHECK(s0[i] == doctest::Approx(born_probability(sharp, grid[i])));
  // Gaussian smearing of cos(2t) multiplies its amplitude by exp(-2 sigma^2).
  const std::size_t at = 1000;
  const double expect = 0.5 + 0.5 * std::exp(-2.0 * 0.09) * std::cos(2.0 * grid[at]);
  CHECK(s1[at] == doctest::Approx(expect).epsilon(1e-3));
  std::vector<double> coarse{0.0, 0.5, 1.0};
  CHECK_THROWS(jittered_signal(blurred, coarse));
}

// ---- spectrum -------------------------------------------------------------

TEST_CASE("spectrum of a damped cosine approaches the Lorentzian") {
  const double dt = 0.01, g = 0.1;
  std::vector<double> x;
  for (int i = 0; i < 20000; ++i) x.push_back(std::exp(-g * i * dt) * std::cos(1.0 * i * dt));
  const auto s = spectrum(x, dt);
  for (double w : {0.5, 1.0, 1.4}) {
    const auto k = nearest_bin(s, w);
    const auto ref = oracle::damped_cosine_transform(1.0, g, 1.0, s.frequencies[k]);
    // Rectangle rule error is about dt / 2 times x(0).
    CHECK(std::abs(s.values[k] - ref) < 0.01 * std::abs(ref) + dt);
  }
  const auto peaks = find_peaks(s, 0.5);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].frequency == doctest::Approx(1.0).epsilon(s.resolution()));
  CHECK(half_width(s, peaks[0]) == doctest::Approx(g).epsilon(0.05));
}

TEST_CASE("spectrum bookkeeping") {
  std::vector<double> x(64, 1.0);
  const auto s = spectrum(x, 0.5, Window::rectangular, 2);
  CHECK(s.transform_length == 128);
  CHECK(s.frequencies.size() == 65);
  CHECK(s.resolution() == doctest::Approx(2 * M_PI / 64.0));
  CHECK(s.values[0].real() == doctest::Approx(32.0));
  CHECK_THROWS(spectrum(std::vector<double>(8, 1.0), 0.1));
  CHECK_THROWS(spectrum(x, 0.0));
  const auto h = spectrum(x, 0.5, Window::hann);
  CHECK(std::abs(h.values[0]) < std::abs(s.values[0]));
}

TEST_CASE("time offset only rotates the phase") {
  std::vector<double> x;
  for (int i = 0; i < 256; ++i) x.push_back(std::cos(0.3 * i));
  const auto a = spectrum(x, 1.0, Window::rectangular, 1, 0.0);
  const auto b = spectrum(x, 1.0, Window::rectangular, 1, 5.0);
  for (std::size_t k = 0; k < a.values.size(); k += 11) {
    CHECK(std::abs(b.values[k]) == doctest::Approx(std::abs(a.values[k])));
    const Complex rot = std::exp(Complex(0.0, a.frequencies[k] * 5.0));
    CHECK(std::abs(b.values[k] - rot * a.values[k]) < 1e-9);
  }
}

// ---- sorkin ---------------------------------------------------------------

TEST_CASE("sorkin observables") {
  const auto obs = sorkin_observables();
  CHECK(obs.labels[0] == "1");
  CHECK(obs.labels[6] == "123");
  CHECK(obs.ops[6].matrix().real().sum() == doctest::Approx(9.0));
  for (const auto& o : obs.ops) CHECK(o.is_positive());
}

TEST_CASE("sorkin functional against the amplitude oracle") {
  oracle::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const auto v = rng.unit_vector(3);
    const double eps = rng.uniform(-2.0, 2.0);
    const ThreeStateConfig cfg({v(0), v(1), v(2)}, eps);
    const std::array<Complex, 3> c{v(0), v(1), v(2)};
    CHECK(std::abs(sorkin_functional(cfg, 1)) < 1e-12);
    CHECK(sorkin_functional(cfg, 2) == doctest::Approx(oracle::sorkin_direct(c, eps, 2)).epsilon(1e-12));
    CHECK(std::abs(sorkin_closed_form(cfg) - oracle::sorkin_direct(c, eps, 2)) < 1e-10);
  }
  const double a = 1.0 / std::sqrt(3.0);
  CHECK(sorkin_closed_form(ThreeStateConfig({a, a, a}, 0.25)) == doctest::Approx(1.0));
  CHECK_THROWS(ThreeStateConfig({1.0, 1.0, 0.0}, 0.1));
  CHECK_THROWS(sorkin_functional(ThreeStateConfig({1.0, 0.0, 0.0}, 0.1), 3));
}
