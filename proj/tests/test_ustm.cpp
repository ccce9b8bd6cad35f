#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncmimo/errors.hpp"
#include "ncmimo/mc.hpp"
#include "ncmimo/ustm.hpp"

using namespace ncmimo;

namespace {

// Diagonal T x N matrix with the given squared singular values.
ComplexMatrix with_spectrum(const std::vector<double>& y, int T, int N) {
  ComplexMatrix x = ComplexMatrix::Zero(T, N);
  for (std::size_t i = 0; i < y.size(); ++i) x(i, i) = std::sqrt(y[i]);
  return x;
}

}  // namespace

TEST_SUITE("ustm") {
  TEST_CASE("C_TM") {
    CHECK(std::exp(log_c_tm(4, 2)) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(std::exp(log_c_tm(2, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::exp(log_c_tm(5, 3)) == doctest::Approx(24.0 * 6.0 * 2.0 / 2.0).epsilon(1e-14));
    CHECK(log_c_tm(3, 3) == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("F for one antenna and T = 2 carries the gamma factor") {
    const SchemeParams p{Scheme::ustm, 2, 1, 1, 1.0};
    const double alpha = derive(p).alpha;
    for (double y : {0.01, 1.0, 30.0, 2000.0}) {
      const std::vector<double> v{y};
      const HankelF f = hankel_f(v, p, 40);
      REQUIRE(f.dim == 1);
      const double x = alpha * y;
      const double expect = x + std::log1p(-std::exp(-x)) - std::log(x);
      CHECK(f.entries[0].log_abs() + f.log_offset == doctest::Approx(expect).epsilon(1e-12));
      CHECK(ustm_log_avg_exp(v, p) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("agrees with the Stiefel oracle") {
    struct Case {
      int T, M, N;
    };
    RngStream rng(11, 0);
    for (const Case c : {Case{3, 1, 1}, Case{4, 2, 2}, Case{4, 3, 1}, Case{3, 2, 2}, Case{4, 1, 3}}) {
      const SchemeParams p{Scheme::ustm, c.T, c.M, c.N, 0.5};
      std::vector<double> y(p.K());
      for (double& v : y) v = 0.8 + 2.0 * std::norm(rng.complex_normal());
      const double closed = std::exp(ustm_log_avg_exp(y, p));
      const OracleEstimate o = stiefel_average_oracle(with_spectrum(y, c.T, c.N), c.M, derive(p).alpha, 40000, 3);
      CAPTURE(c.T);
      CAPTURE(c.M);
      CAPTURE(c.N);
      CHECK(std::abs(closed - o.mean) <= 4.0 * o.std_error);
    }
  }

  TEST_CASE("T = M is the trace") {
    const SchemeParams p{Scheme::ustm, 2, 2, 3, 3.0};
    const std::vector<double> y{4.0, 1.0};
    CHECK(ustm_log_avg_exp(y, p) == doctest::Approx(derive(p).alpha * 5.0).epsilon(1e-15));
    RngStream rng(2, 0);
    CHECK(ustm_log_ratio(sample_ustm(p, rng), p) == 0.0);
  }

  TEST_CASE("tied values") {
    const SchemeParams p{Scheme::ustm, 4, 2, 2, 1.0};
    const std::vector<double> tied{2.0, 2.0};
    const std::vector<double> near{2.0 * (1 + 1e-7), 2.0};
    const double a = ustm_log_avg_exp(tied, p);
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(ustm_log_avg_exp(near, p)).epsilon(1e-6));
  }

  TEST_CASE("high SNR needs and gets extra digits") {
    const SchemeParams p{Scheme::ustm, 4, 2, 2, 1000.0};
    const std::vector<double> y{21046.65, 1239.57};
    CHECK(ustm_initial_digits(y, p) > 8000);
    const double v = ustm_log_avg_exp(y, p);
    CHECK(std::isfinite(v));
    // Bounded by the largest rank-2 projection, and within polynomial factors of it.
    const double top = derive(p).alpha * (y[0] + y[1]);
    CHECK(v < top);
    CHECK(v > top - 60.0);
  }

  TEST_CASE("input checks") {
    const SchemeParams p{Scheme::ustm, 4, 2, 2, 1.0};
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(ustm_log_avg_exp(one, p), DomainError);
    const std::vector<double> zero{1.0, 0.0};
    CHECK_THROWS_AS(ustm_log_avg_exp(zero, p), DomainError);
    const SchemeParams d{Scheme::dustm, 4, 2, 2, 1.0};
    const UstmSample s{ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)};
    CHECK_THROWS_AS(ustm_log_ratio(s, d), ConfigError);
  }

  TEST_CASE("sample layout and spectrum") {
    const SchemeParams p{Scheme::ustm, 5, 2, 3, 2.0};
    RngStream rng(4, 0);
    const UstmSample s = sample_ustm(p, rng);
    CHECK(s.x1.rows() == 2);
    CHECK(s.x2.rows() == 3);
    CHECK(s.x1.cols() == 3);
    const Spectrum y = ustm_y_spectrum(s, p);
    CHECK(y.size() == 3);
    const double gain = 1.0 + 2.0 * 5.0 / 2.0;
    CHECK(y.sum() == doctest::Approx(gain * s.x1.squaredNorm() + s.x2.squaredNorm()).epsilon(1e-12));
  }
}
