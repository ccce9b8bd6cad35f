#include <doctest.h>

#include <cmath>

#include "ncmimo/errors.hpp"
#include "ncmimo/linalg.hpp"

using namespace ncmimo;

TEST_SUITE("linalg") {
  TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }

  TEST_CASE("complex normal has unit variance") {
    RngStream rng(1, 0);
    double re2 = 0.0, im2 = 0.0, cross = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const Complex z = rng.complex_normal();
      re2 += z.real() * z.real();
      im2 += z.imag() * z.imag();
      cross += z.real() * z.imag();
    }
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(cross / n) < 0.01);
  }

  TEST_CASE("haar samples are unitary") {
    RngStream rng(3, 0);
    for (int m : {1, 2, 5, 8}) {
      const ComplexMatrix u = sample_haar_unitary(m, rng);
      CHECK((u.adjoint() * u - ComplexMatrix::Identity(m, m)).norm() < 1e-12);
    }
  }

  TEST_CASE("hermitian eigenvalues") {
    ComplexMatrix a(2, 2);
    a << 2.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 2.0;
    const Spectrum s = hermitian_eigenvalues(a);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(3.0));
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(s.sum() == doctest::Approx(4.0));

    ComplexMatrix bad(2, 2);
    bad << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(bad), DomainError);
    ComplexMatrix negative = -ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(hermitian_eigenvalues(negative), DomainError);
  }

  TEST_CASE("singular values match eigenvalues of the Gram matrix") {
    RngStream rng(5, 0);
    const ComplexMatrix x = sample_gaussian(4, 2, rng);
    const Spectrum s = singular_values(x);
    const Spectrum e = hermitian_eigenvalues(x.adjoint() * x);
    REQUIRE(s.size() == 2);
    for (int i = 0; i < 2; ++i) CHECK(s[i] * s[i] == doctest::Approx(e[i]).epsilon(1e-12));
    CHECK(s[0] >= s[1]);
  }

  TEST_CASE("equilibrated log det") {
    RngStream rng(9, 0);
    RealMatrix a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = rng.normal();
    const double det = a.determinant();
    const LogDet d = equilibrated_log_det(a);
    CHECK(d.log_abs == doctest::Approx(std::log(std::abs(det))).epsilon(1e-12));
    CHECK(d.sign == (det > 0 ? 1 : -1));

    // Badly scaled rows and columns do not overflow.
    RealMatrix b = a;
    b.row(0) *= 1e200;
    b.col(2) *= 1e-250;
    const LogDet db = equilibrated_log_det(b);
    CHECK(db.log_abs == doctest::Approx(d.log_abs + std::log(1e200) + std::log(1e-250)).epsilon(1e-12));
    CHECK(db.sign == d.sign);
    CHECK(db.rcond > 1e-6);

    RealMatrix s = RealMatrix::Ones(3, 3);
    CHECK(equilibrated_log_det(s).sign == 0);
  }
}
