#pragma once

#include <cstdint>

namespace ncmimo {

/// Exponentially scaled modified Bessel function of the first kind, e^{-x} I_n(x).
/// Ascending series for x <= 30; Hankel asymptotic series above, falling back to a
/// continued fraction with downward recurrence when n is large compared with sqrt(x).
double scaled_bessel_i(int n, double x);

/// P(q, x) = gamma(q, x) / Gamma(q) for integer q >= 1.
double regularized_lower_gamma(int q, double x);
/// Q(q, x) = 1 - P(q, x), computed without cancellation.
double regularized_upper_gamma(int q, double x);

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
double harmonic(int n);

/// digamma(n + 1) * log2(e) = (H_n - C) log2(e). Satisfies
/// integral_0^inf lambda^n e^{-lambda} log2(lambda) d lambda = n! * expected_log2_gamma_moment(n).
double expected_log2_gamma_moment(int n);

/// Associated Laguerre polynomial L_k^Q(x) by three-term recurrence.
double laguerre(int k, int Q, double x);

double log_factorial(int n);

/// Exact binomial coefficient for 0 <= k <= n <= 64.
std::uint64_t binomial_exact(int n, int k);

}  // namespace ncmimo
