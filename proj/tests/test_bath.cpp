#include "doctest.h"
#include "oracles.hpp"

#include "manycopies/bath.hpp"

using namespace manycopies;

TEST_CASE("golden-rule couplings") {
  const CopySpace space(3, 2);
  const BathModel b = bath_from_rate(space, 0.2, 0.1, 100, 10.0);
  CHECK(b.density_of_states == doctest::Approx(10.0));
  CHECK(b.levels.size() == 100);
  CHECK(b.levels.front() == doctest::Approx(0.05));
  CHECK(b.levels.back() == doctest::Approx(9.95));
  for (std::int64_t k : {-1, 1, 3}) {
    for (int sign : {1, -1}) {
      const double f = b.coupling(k, sign);
      const double rate = 2.0 * M_PI * f * f * b.density_of_states / b.hbar;
      CHECK(rate == doctest::Approx(0.04 * double(3 + sign * k)));
    }
  }
  CHECK(b.resonance(1) == doctest::Approx(0.1 * 8));
}

TEST_CASE("bath construction rejects bad input") {
  CHECK_THROWS(bath_from_rate(CopySpace(2, 3), 0.2, 0.1, 100, 10.0));
  CHECK_THROWS(bath_from_rate(CopySpace(2, 2), 0.2, 0.1, 1, 10.0));
  CHECK_THROWS(bath_from_rate(CopySpace(2, 2), 0.2, 1.0, 100, 3.0));
  CHECK_THROWS(centered_bath(CopySpace(2, 2), 0.2, 2, 100));
}

TEST_CASE("centered band places the resonance mid-band") {
  const CopySpace space(3, 2);
  const BathModel b = centered_bath(space, 0.2, 1, 200);
  CHECK(b.e_max == doctest::Approx(8.0 * 2.0));
  CHECK(b.resonance(1) == doctest::Approx(b.e_max / 2));
}

TEST_CASE("unitary evolution conserves norm") {
  const CopySpace space(2, 2);
  const BathModel b = centered_bath(space, std::sqrt(0.05), 0, 100);
  const auto s = bath_evolve(b, BasisLabel(space, {0, 1}), 20.0);
  CHECK(s.norm_drift < 1e-8);
  for (std::size_t i = 0; i < s.times.size(); ++i)
    CHECK(s.initial[i] + s.plus_family[i] + s.minus_family[i] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("few levels give recurrences instead of decay") {
  const CopySpace space(2, 2);
  const BathModel b = bath_from_rate(space, 0.3, 0.25, 2, 2.0);
  const auto s = bath_evolve(b, BasisLabel(space, {0, 1}), 200.0);
  // Survival returns close to one long after the golden-rule lifetime.
  const double gamma = 0.09 * 4;
  double late_max = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    if (s.times[i] > 10.0 / gamma) late_max = std::max(late_max, s.initial[i]);
  CHECK(late_max > 0.5);
}

TEST_CASE("decay fit recovers an exact exponential") {
  std::vector<double> t, s;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.05 * i);
    s.push_back(std::exp(-0.7 * t.back()));
  }
  CHECK(fit_decay_rate(t, s, 5.0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS(fit_decay_rate(t, s, 0.0));
}

TEST_CASE("biased branching with three copies") {
  // |++-> has k = 1: Lindblad branching (N + k)/(2N) = 2/3 into |+++>.
  const CopySpace space(3, 2);
  const double alpha = std::sqrt(0.02);
  const BathModel b = centered_bath(space, alpha, 1, 400);
  const auto c = compare_bath_to_lindblad(b, BasisLabel(space, {0, 0, 1}));
  CHECK(c.lindblad_rate == doctest::Approx(2 * 3 * 0.02).epsilon(1e-6));
  CHECK(c.lindblad_branching == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(c.rate_error < 0.05);
  CHECK(c.branching_error < 0.05);
}

TEST_CASE("bath sector obeys the ket cap") {
  const CopySpace space(2, 2);
  NumericConfig small;
  small.dense_cap = 101;
  const BathModel b = centered_bath(space, 0.2, 0, 100);
  CHECK_THROWS_AS(bath_evolve(b, BasisLabel(space, {0, 1}), 1.0, 0.0, 1, small), CapExceeded);
}
