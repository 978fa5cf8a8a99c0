#include "doctest.h"
#include "oracles.hpp"

#include "manycopies/qmath.hpp"

using namespace manycopies;

TEST_CASE("operator flags are validated on construction") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS_AS(Operator::hermitian(m), InvariantViolation);
  CHECK_THROWS_AS(Operator(ComplexMatrix(2, 3)), DimensionMismatch);

  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  CHECK_NOTHROW(Operator::hermitian(neg));
  CHECK_THROWS_AS(Operator::positive(neg), InvariantViolation);

  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Operator(bad));
}

TEST_CASE("flag propagation through arithmetic") {
  const Operator p = Operator::positive(ComplexMatrix::Identity(2, 2));
  const Operator h = pauli(Axis::x);
  CHECK((p + p).is_positive());
  CHECK((p + h).is_hermitian());
  CHECK_FALSE((p + h).is_positive());
  CHECK((2.0 * p).is_positive());
  CHECK_FALSE((-1.0 * p).is_positive());
  CHECK((-1.0 * p).is_hermitian());
  CHECK_FALSE((h * h).is_hermitian());
}

TEST_CASE("pauli matrices and eigenbases") {
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const ComplexMatrix s = pauli(a).matrix();
    CHECK(oracle::max_abs(s * s - ComplexMatrix::Identity(2, 2)) < 1e-15);
    const ComplexMatrix u = pauli_eigenbasis(a);
    CHECK(oracle::max_abs(u.adjoint() * u - ComplexMatrix::Identity(2, 2)) < 1e-14);
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    CHECK(oracle::max_abs(u.adjoint() * s * u - diag) < 1e-14);
    for (int sign : {1, -1}) {
      const Ket k = Ket::pauli_eigenstate(a, sign);
      CHECK(oracle::max_abs(s * k.amplitudes() - double(sign) * k.amplitudes()) < 1e-14);
    }
  }
  CHECK(oracle::max_abs(pauli_eigenbasis(Axis::z) - ComplexMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("tensor matches an elementwise Kronecker oracle") {
  oracle::Rng rng(11);
  const Operator a(rng.matrix(2)), b(rng.matrix(3)), c(rng.matrix(2));
  const Operator t = tensor({a, b, c});
  const auto ref = oracle::kron(oracle::kron(a.matrix(), b.matrix()), c.matrix());
  CHECK(oracle::max_abs(t.matrix() - ref) < 1e-13);
  CHECK(oracle::max_abs(kron(a.matrix(), b.matrix()) - oracle::kron(a.matrix(), b.matrix())) < 1e-14);

  const Operator h1 = Operator::hermitian(rng.hermitian(2));
  const Operator h2 = Operator::hermitian(rng.hermitian(2));
  CHECK(tensor({h1, h2}).is_hermitian());
}

TEST_CASE("tensor refuses to exceed the dense cap") {
  std::vector<Operator> ops(7, pauli(Axis::z));  // 128 x 128 = 16384 entries
  CHECK_THROWS_AS(tensor(ops), CapExceeded);
  std::vector<Operator> six(6, pauli(Axis::z));
  CHECK(tensor(six).dim() == 64);

  NumericConfig small;
  small.dense_cap = 15;
  CHECK_THROWS_AS(tensor({pauli(Axis::x), pauli(Axis::x)}, small), CapExceeded);
}

TEST_CASE("hermitian eigendecomposition reconstructs the operator") {
  oracle::Rng rng(3);
  const Operator h = Operator::hermitian(rng.hermitian(5));
  const HermitianEigen e = eig_hermitian(h);
  for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i) >= e.values(i - 1));
  const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  CHECK(oracle::max_abs(back - h.matrix()) < 1e-12);
  CHECK(min_eigenvalue(h.matrix()) == doctest::Approx(e.values(0)).epsilon(1e-12));
  CHECK_THROWS_AS(eig_hermitian(Operator(rng.matrix(3))), InvalidArgument);
}

TEST_CASE("matrix functions") {
  oracle::Rng rng(5);
  const Operator h = Operator::hermitian(rng.hermitian(4));
  const ComplexMatrix u = unitary_propagator(h, 0.7, 1.3);
  const ComplexMatrix ref = (Complex(0.0, -0.7 / 1.3) * h.matrix()).exp();
  CHECK(oracle::max_abs(u - ref) < 1e-12);
  CHECK(oracle::max_abs(u.adjoint() * u - ComplexMatrix::Identity(4, 4)) < 1e-12);

  const Operator rho = Operator::positive(rng.density(4));
  const Operator r = sqrt_positive(rho);
  CHECK(oracle::max_abs(r.matrix() * r.matrix() - rho.matrix()) < 1e-12);
  CHECK(r.is_positive());

  const ComplexMatrix sq = hermitian_function(h, [](double x) { return Complex(x * x, 0.0); });
  CHECK(oracle::max_abs(sq - h.matrix() * h.matrix()) < 1e-11);
}

TEST_CASE("kets and density matrices") {
  CHECK_THROWS(Ket(ComplexVector::Ones(2)));
  const Ket k = Ket::normalized(ComplexVector::Ones(4));
  CHECK(k.amplitudes().norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Ket::normalized(ComplexVector::Zero(3)), InvalidArgument);
  CHECK(Ket::basis(3, 2)[2] == Complex(1.0, 0.0));

  const DensityMatrix rho = DensityMatrix::pure(k);
  CHECK(rho.purity() == doctest::Approx(1.0));
  CHECK(DensityMatrix::maximally_mixed(4).purity() == doctest::Approx(0.25));
  CHECK(rho.populations().sum() == doctest::Approx(1.0));

  CHECK_THROWS(DensityMatrix(2.0 * ComplexMatrix::Identity(2, 2)));
  ComplexMatrix notpos = ComplexMatrix::Zero(2, 2);
  notpos(0, 0) = 1.5;
  notpos(1, 1) = -0.5;
  CHECK_THROWS(DensityMatrix(notpos));
}

TEST_CASE("expectation values and embedding") {
  oracle::Rng rng(9);
  const DensityMatrix rho(rng.density(2));
  const auto b = oracle::bloch(rho.matrix());
  CHECK(expectation(pauli(Axis::x), rho).real() == doctest::Approx(b[0]).epsilon(1e-12));
  CHECK(expectation(pauli(Axis::y), rho).real() == doctest::Approx(b[1]).epsilon(1e-12));
  CHECK(expectation(pauli(Axis::z), rho).real() == doctest::Approx(b[2]).epsilon(1e-12));

  const CopySpace space(3, 2);
  const Operator z2 = embed(pauli(Axis::z), 2, space);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const auto ref = oracle::kron(oracle::kron(id, pauli(Axis::z).matrix()), id);
  CHECK(oracle::max_abs(z2.matrix() - ref) == 0.0);
  CHECK_THROWS(embed(pauli(Axis::z), 0, space));
  CHECK_THROWS(embed(pauli(Axis::z), 4, space));
  CHECK_THROWS_AS(embed(Operator::identity(3), 1, space), DimensionMismatch);
}

TEST_CASE("hermiticity defect") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK(hermiticity_defect(m) == doctest::Approx(1.0));
  CHECK(hermiticity_defect(pauli(Axis::y).matrix()) == 0.0);
}
