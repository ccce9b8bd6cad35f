#include "ncmimo/specialfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ncmimo/errors.hpp"
#include "ncmimo/params.hpp"

namespace ncmimo {

namespace {

constexpr double kSeriesLimit = 30.0;

double bessel_series_scaled(int n, double x) {
  const double half = 0.5 * x;
  const double log_t0 = n * std::log(half) - std::lgamma(n + 1.0) - x;
  const double q = half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 500; ++k) {
    term *= q / ((k + 1.0) * (k + n + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_t0) * sum;
}

// Hankel expansion e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(n) / x^k,
// truncated at the smallest term.
double bessel_asymptotic_scaled(int n, double x) {
  const double mu = 4.0 * n * static_cast<double>(n);
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last && odd * odd > mu) break;  // divergent tail
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Miller's downward recurrence normalized by e^{-x} I_0(x).
double bessel_miller_scaled(int n, double x) {
  const double top = std::max<double>(n, x);
  const int start = static_cast<int>(top + 30.0 + std::ceil(std::sqrt(60.0 * top)));
  double next = 0.0;  // I_{k+1}
  double cur = 1e-300;  // I_k
  double at_n = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * cur + next;  // I_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == n) at_n = cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      at_n *= 1e-250;
    }
  }
  if (n == 0) at_n = cur;
  return at_n / cur * bessel_asymptotic_scaled(0, x);
}

}  // namespace

double scaled_bessel_i(int n, double x) {
  if (n < 0) throw DomainError("scaled_bessel_i: negative order " + std::to_string(n));
  if (!(x >= 0.0)) throw DomainError("scaled_bessel_i: negative or NaN argument");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (std::isinf(x)) return 0.0;
  if (x <= kSeriesLimit) return bessel_series_scaled(n, x);
  if (static_cast<double>(n) * n <= 8.0 * x) return bessel_asymptotic_scaled(n, x);
  return bessel_miller_scaled(n, x);
}

namespace {

// e^{-x} sum_{j<q} x^j / j!
double poisson_head(int q, double x) {
  const double lx = std::log(x);
  double sum = 0.0;
  for (int j = 0; j < q; ++j) sum += std::exp(j * lx - x - std::lgamma(j + 1.0));
  return sum;
}

// e^{-x} x^q / q! * sum_k x^k / ((q+1)...(q+k))
double lower_series(int q, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (q + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(q * std::log(x) - x - std::lgamma(q + 1.0)) * sum;
}

void check_gamma_args(int q, double x) {
  if (q < 1) throw DomainError("regularized gamma: q must be >= 1");
  if (!(x >= 0.0)) throw DomainError("regularized gamma: x must be >= 0");
}

}  // namespace

double regularized_lower_gamma(int q, double x) {
  check_gamma_args(q, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < q) return lower_series(q, x);
  return 1.0 - poisson_head(q, x);
}

double regularized_upper_gamma(int q, double x) {
  check_gamma_args(q, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < q) return 1.0 - lower_series(q, x);
  return poisson_head(q, x);
}

double harmonic(int n) {
  if (n < 0) throw DomainError("harmonic: negative index");
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

double expected_log2_gamma_moment(int n) { return (harmonic(n) - kEulerGamma) * kLog2e; }

double laguerre(int k, int Q, double x) {
  if (k < 0 || Q < 0) throw DomainError("laguerre: k and Q must be nonnegative");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + Q - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + Q - x) * cur - (j + Q) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n < 2) return 0.0;
  return std::lgamma(n + 1.0);
}

std::uint64_t binomial_exact(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("binomial_exact: requires 0 <= k <= n");
  if (n > 64) throw CapabilityError("binomial_exact: n > 64 is not supported");
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  return static_cast<std::uint64_t>(r);
}

}  // namespace ncmimo
