#include <doctest.h>

#include <cmath>

#include "ncmimo/bigreal.hpp"
#include "ncmimo/errors.hpp"

using namespace ncmimo;

TEST_SUITE("bigreal") {
  TEST_CASE("round trip and arithmetic") {
    const BigReal a(1.25, 40), b(3L, 40);
    CHECK((a + b).to_double() == 4.25);
    CHECK((a - b).to_double() == -1.75);
    CHECK((a * b).to_double() == 3.75);
    CHECK((b / a).to_double() == 2.4);
    CHECK((-a).sign() == -1);
    CHECK(BigReal(30).is_zero());
    CHECK(a < b);
    CHECK(BigReal(0.1, 30).to_double() == 0.1);
  }

  TEST_CASE("precision survives cancellation that doubles cannot") {
    // (1 + 1e-40) - 1 at 60 digits.
    const BigReal one(1L, 60);
    const BigReal tiny = pow(BigReal(10L, 60), -40);
    const BigReal diff = (one + tiny) - one;
    CHECK(diff.to_double() == doctest::Approx(1e-40).epsilon(1e-15));
  }

  TEST_CASE("exp, log, sqrt") {
    const BigReal x(2.5, 50);
    CHECK(log(exp(x)).to_double() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(sqrt(BigReal(2L, 50)).to_double() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(abs(BigReal(-3L, 20)).to_double() == 3.0);
    CHECK_THROWS(log(BigReal(-1L, 20)));
  }

  TEST_CASE("log_abs beyond double range") {
    const BigReal big = exp(BigReal(5000L, 40));
    CHECK_FALSE(std::isfinite(big.to_double()));
    CHECK(big.log_abs() == doctest::Approx(5000.0).epsilon(1e-14));
    const BigReal small = exp(BigReal(-5000L, 40));
    CHECK(small.log_abs() == doctest::Approx(-5000.0).epsilon(1e-14));
  }

  TEST_CASE("widening to the larger precision") {
    BigReal lo(1L, 10);
    const BigReal hi(1L, 80);
    lo += hi;
    CHECK(lo.digits() >= 80);
  }

  TEST_CASE("determinant") {
    std::vector<BigReal> a;
    for (double v : {4.0, 3.0, 6.0, 3.0}) a.emplace_back(v, 30);
    const BigLogDet d = big_log_det(a, 2);
    CHECK(d.sign == -1);
    CHECK(d.log_abs == doctest::Approx(std::log(6.0)).epsilon(1e-14));

    std::vector<BigReal> s;
    for (double v : {1.0, 2.0, 2.0, 4.0}) s.emplace_back(v, 30);
    CHECK(big_log_det(s, 2).sign == 0);

    // Nearly singular in double, fine at 60 digits.
    const BigReal eps = pow(BigReal(10L, 60), -30);
    std::vector<BigReal> n{BigReal(1L, 60), BigReal(1L, 60), BigReal(1L, 60), BigReal(1L, 60) + eps};
    const BigLogDet dn = big_log_det(n, 2);
    CHECK(dn.sign == 1);
    CHECK(dn.log_abs == doctest::Approx(std::log(1e-30)).epsilon(1e-12));
  }
}
