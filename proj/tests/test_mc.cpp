#include <doctest.h>

#include <cmath>
#include <variant>
#include <vector>

#include "ncmimo/errors.hpp"
#include "ncmimo/mc.hpp"

using namespace ncmimo;

TEST_SUITE("mc") {
  TEST_CASE("Welford matches two-pass statistics") {
    const std::vector<double> xs{1.0, 4.0, -2.5, 7.25, 0.0, 3.5, 3.5};
    Welford w;
    double sum = 0.0;
    for (double x : xs) w.add(x), sum += x;
    const double mean = sum / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    CHECK(w.count() == 7);
    CHECK(w.mean() == doctest::Approx(mean).epsilon(1e-15));
    CHECK(w.variance() == doctest::Approx(ss / 6.0).epsilon(1e-14));
    CHECK(w.std_error() == doctest::Approx(std::sqrt(ss / 6.0 / 7.0)).epsilon(1e-14));

    Welford a, b;
    for (std::size_t i = 0; i < xs.size(); ++i) (i < 3 ? a : b).add(xs[i]);
    a.merge(b);
    CHECK(a.mean() == doctest::Approx(mean).epsilon(1e-15));
    CHECK(a.variance() == doctest::Approx(ss / 6.0).epsilon(1e-14));
    Welford empty;
    empty.merge(a);
    CHECK(empty.count() == 7);
  }

  TEST_CASE("results do not depend on the worker count") {
    const SchemeParams p{Scheme::dustm, 4, 2, 2, 1.0};
    const MIEstimate one = estimate_mi(p, {3000, 17, 1});
    const MIEstimate three = estimate_mi(p, {3000, 17, 3});
    CHECK(one == three);
    CHECK(one.samples == 3000);
    const MIEstimate other = estimate_mi(p, {3000, 18, 1});
    CHECK(other.bits_per_block != one.bits_per_block);
  }

  TEST_CASE("configuration errors") {
    const SchemeParams p{Scheme::dustm, 2, 1, 1, 1.0};
    CHECK_THROWS_AS(estimate_mi(p, {99, 1, 1}), ConfigError);
    CHECK_THROWS_AS(estimate_mi(p, {1000, 1, 0}), ConfigError);
    CHECK_THROWS_AS(estimate_mi({Scheme::dustm, 3, 1, 1, 1.0}, {1000, 1, 1}), ConfigError);
  }

  TEST_CASE("failure accounting") {
    // One failure in 2000 is tolerated, three are not.
    const SampleStatistics ok = run_samples({2000, 1, 2}, [](std::int64_t i, RngStream&) {
      if (i == 1500) throw NumericError("boom");
      return 1.0;
    });
    CHECK(ok.failed == 1);
    CHECK(ok.stats.count() == 1999);
    CHECK(ok.first_failure.find("1500") != std::string::npos);
    CHECK_THROWS_AS(run_samples({2000, 1, 2},
                                [](std::int64_t i, RngStream&) {
                                  if (i % 700 == 0) throw NumericError("boom");
                                  return 1.0;
                                }),
                    NumericError);
    // Other exceptions propagate.
    CHECK_THROWS_AS(run_samples({10, 1, 1}, [](std::int64_t, RngStream&) -> double { throw ConfigError("x"); }),
                    ConfigError);
  }

  TEST_CASE("mutual information is zero at zero SNR and for T = M") {
    const MIEstimate z = estimate_mi({Scheme::dustm, 2, 1, 1, 0.0}, {200, 1, 1});
    CHECK(z.bits_per_block == 0.0);
    const MIEstimate t = estimate_mi({Scheme::ustm, 3, 3, 2, 10.0}, {200, 1, 1});
    CHECK(t.bits_per_block == 0.0);
    CHECK(t.std_error == 0.0);
  }

  TEST_CASE("channel oracle and scheme samplers give the same law") {
    for (Scheme s : {Scheme::dustm, Scheme::ustm}) {
      const SchemeParams p{s, 2, 1, 1, 2.0};
      const SampleStatistics direct = run_samples({40000, 3, 1}, [&](std::int64_t, RngStream& rng) {
        const ChannelSample c = channel_oracle_sample(p, rng);
        return s == Scheme::dustm ? dustm_log_ratio(std::get<DustmSample>(c), p)
                                  : ustm_log_ratio(std::get<UstmSample>(c), p);
      });
      const MIEstimate e = estimate_mi(p, {40000, 4, 1});
      const double diff = direct.stats.mean() - e.bits_per_block;
      const double se = std::hypot(direct.stats.std_error(), e.std_error * p.normalization());
      CAPTURE(to_string(s));
      CHECK(std::abs(diff) <= 4.0 * se);
    }
  }

  TEST_CASE("normalization identity") {
    // rho T / M < 1 keeps the variance of 2^-log_ratio finite.
    for (Scheme s : {Scheme::dustm, Scheme::ustm}) {
      const SchemeParams p{s, 4, 2, 1, 0.3};
      const Welford w = normalization_check(p, {20000, 9, 1});
      CAPTURE(to_string(s));
      CHECK(std::abs(w.mean() - 1.0) <= 4.0 * w.std_error());
    }
  }

  TEST_CASE("unitary moment suite") {
    for (int m : {1, 3}) {
      for (const MomentCheck& c : unitary_moment_suite(m, 20000, 5)) {
        CAPTURE(m);
        CAPTURE(c.name);
        CHECK(c.passed);
      }
    }
  }

  TEST_CASE("Wishart log moments for one antenna") {
    // lambda ~ Exp(1): E[log2 lambda] = -C log2 e.
    const WishartLogMoments w = wishart_log_moments(1, 1, 100000, 2);
    CHECK(std::abs(w.l1.mean + 0.8327462) <= 4.0 * w.l1.std_error);
    CHECK(std::isnan(w.l2.mean));
  }
}
