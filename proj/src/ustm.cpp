#include "ncmimo/ustm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "ncmimo/errors.hpp"
#include "ncmimo/specialfn.hpp"

namespace ncmimo {

namespace {

constexpr double kLog10e = 0.43429448190325182765;
constexpr unsigned kMaxDigits = 10000;

std::string describe(std::span<const double> y) {
  std::ostringstream os;
  os.precision(17);
  os << "y = [";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
  os << "]";
  return os.str();
}

// Sorted nonincreasing, ties pulled apart, and checked.
std::vector<double> prepare(std::span<const double> y_in, const SchemeParams& params) {
  if (static_cast<int>(y_in.size()) != params.K()) {
    throw DomainError("ustm: expected " + std::to_string(params.K()) + " values, got " +
                      std::to_string(y_in.size()));
  }
  std::vector<double> y(y_in.begin(), y_in.end());
  for (double v : y) {
    if (!std::isfinite(v)) throw NumericError("ustm: non-finite spectrum; " + describe(y_in));
    if (v <= 0.0) throw DomainError("ustm: spectrum must be strictly positive; " + describe(y_in));
  }
  std::sort(y.begin(), y.end(), std::greater<>());
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k - 1] - y[k] <= 1e-12 * y[k - 1]) y[k] = y[k - 1] * (1.0 - 1e-9 * static_cast<double>(k));
  }
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (!(y[k - 1] > y[k])) throw NumericError("ustm: could not separate tied values; " + describe(y_in));
  }
  return y;
}

// Decimal magnitude of the largest term in any entry of F (after factoring exp(x_1)).
double max_term_log10(const std::vector<double>& x, int T, int K, int M) {
  double worst = -1e300;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double ld = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l)
      if (l != k) ld += std::log10(std::abs(x[k] - x[l]));
    const double base = (x[k] - x[0]) * kLog10e - ld;
    const double lx = std::log10(x[k]);
    for (int s = 2; s <= 2 * M; ++s) {
      const int q = T - K - s + 2;
      // For q >= 1 the entry is bounded by the first series term 1/q!.
      const double mag = q <= 0 ? -q * lx : std::min(-std::lgamma(q + 1.0) * kLog10e, -q * lx + x[k] * kLog10e);
      worst = std::max(worst, base + mag);
    }
  }
  return worst;
}

// sum_{i>=0} x^i / (i+q)!
BigReal tail_series(int q, const BigReal& x, unsigned digits) {
  BigReal term(1L, digits);
  for (int j = 2; j <= q; ++j) term /= BigReal(static_cast<long>(j), digits);
  BigReal sum(term);
  const BigReal tiny = pow(BigReal(10L, digits), -static_cast<long>(digits) - 5);
  const double xd = x.to_double();
  for (long i = 0; i < 10000000; ++i) {
    term *= x;
    term /= BigReal(static_cast<long>(i + q + 1), digits);
    sum += term;
    if (static_cast<double>(i + q + 1) > xd && term < sum * tiny) break;
  }
  return sum;
}

double log_det_at(std::span<const double> y, const SchemeParams& params, unsigned digits) {
  const HankelF f = hankel_f(y, params, digits);
  const BigLogDet d = big_log_det(f.entries, f.dim);
  if (d.sign == 0 || !std::isfinite(d.log_abs)) {
    throw NumericError("ustm: singular Hankel matrix at " + std::to_string(digits) + " digits; " +
                       describe(y));
  }
  return d.log_abs + f.log_offset;
}

}  // namespace

double log_c_tm(int T, int M) {
  double out = 0.0;
  for (int k = 1; k <= M; ++k) out += log_factorial(T - k) - log_factorial(M - k);
  return out;
}

Spectrum ustm_y_spectrum(const UstmSample& sample, const SchemeParams& params) {
  if (sample.x1.rows() != params.M || sample.x2.rows() != params.T - params.M ||
      sample.x1.cols() != params.N || sample.x2.cols() != params.N) {
    throw DomainError("ustm_y_spectrum: sample shape does not match (T, M, N)");
  }
  const double gain = std::sqrt(1.0 + params.rho * params.T / params.M);
  ComplexMatrix x(params.T, params.N);
  x.topRows(params.M) = gain * sample.x1;
  x.bottomRows(params.T - params.M) = sample.x2;
  const Spectrum s = singular_values(x);
  Spectrum y;
  const int k = params.K();
  y.values.resize(k);
  for (int i = 0; i < k; ++i) y.values[i] = s[i] * s[i];
  return y;
}

HankelF hankel_f(std::span<const double> y_in, const SchemeParams& params, unsigned digits) {
  const DerivedConstants c = derive(params);
  if (c.alpha <= 0.0) throw DomainError("hankel_f: alpha must be positive");
  const std::vector<double> y = prepare(y_in, params);
  const int M = params.M;
  const int T = params.T;
  const int K = params.K();

  const BigReal alpha(c.alpha, digits);
  std::vector<BigReal> x;
  x.reserve(K);
  for (double v : y) x.push_back(alpha * BigReal(v, digits));

  // Per-point pieces: exp(x_k - x_1) / prod_{l != k}(x_k - x_l), and exp(-x_1).
  const BigReal e_minus_x1 = exp(-x[0]);
  std::vector<BigReal> lead;
  lead.reserve(K);
  for (int k = 0; k < K; ++k) {
    BigReal denom(1L, digits);
    for (int l = 0; l < K; ++l)
      if (l != k) denom *= (x[k] - x[l]);
    lead.push_back(exp(x[k] - x[0]) / denom);
  }

  // Entry for each anti-diagonal s = m + n (1-based) = 2..2M.
  std::vector<BigReal> by_s;
  for (int s = 2; s <= 2 * M; ++s) {
    const int q = T - K - s + 2;
    BigReal sum(digits);
    for (int k = 0; k < K; ++k) {
      const double xd = x[k].to_double();
      if (q <= 0) {
        sum += lead[k] * pow(x[k], -q);
      } else if (xd < q + 10.0) {
        // e^{x} P(q, x) / x^q without cancellation.
        BigReal denom(1L, digits);
        for (int l = 0; l < K; ++l)
          if (l != k) denom *= (x[k] - x[l]);
        sum += e_minus_x1 * tail_series(q, x[k], digits) / denom;
      } else {
        // (e^{x} - sum_{j<q} x^j / j!) / x^q
        BigReal head(1L, digits);
        BigReal term(1L, digits);
        for (int j = 1; j < q; ++j) {
          term *= x[k];
          term /= BigReal(static_cast<long>(j), digits);
          head += term;
        }
        BigReal denom(1L, digits);
        for (int l = 0; l < K; ++l)
          if (l != k) denom *= (x[k] - x[l]);
        sum += (lead[k] - e_minus_x1 * head / denom) / pow(x[k], q);
      }
    }
    by_s.push_back(std::move(sum));
  }

  HankelF f;
  f.dim = M;
  f.digits = digits;
  f.log_offset = M * x[0].to_double();
  f.entries.reserve(static_cast<std::size_t>(M) * M);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < M; ++n) f.entries.push_back(by_s[m + n]);
  return f;
}

unsigned ustm_initial_digits(std::span<const double> y_in, const SchemeParams& params) {
  const DerivedConstants c = derive(params);
  const std::vector<double> y = prepare(y_in, params);
  const int M = params.M;
  const int K = params.K();
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = c.alpha * y[i];
  // The determinant is of order exp(sum_{m <= min(M,K)} x_m) while its entries carry
  // exp(x_1) each; the gap is lost to cancellation.
  double lost = M * x[0];
  for (int m = 0; m < std::min(M, K); ++m) lost -= x[m];
  const double digits =
      30.0 + std::ceil(lost * kLog10e) + std::max(0.0, std::ceil(max_term_log10(x, params.T, K, M)));
  return static_cast<unsigned>(std::min<double>(digits, kMaxDigits));
}

double ustm_log_avg_exp(std::span<const double> y, const SchemeParams& params) {
  params.validate();
  const DerivedConstants c = derive(params);
  if (params.T == params.M) {
    double total = 0.0;
    for (double v : y) total += v;
    return c.alpha * total;
  }
  if (c.alpha == 0.0) return 0.0;

  unsigned p = ustm_initial_digits(y, params);
  while (true) {
    const unsigned p2 = p + 20;
    if (p2 > kMaxDigits) {
      throw NumericError("ustm: precision limit of " + std::to_string(kMaxDigits) +
                         " digits reached (try a smaller rho); " + describe(y));
    }
    const double lo = log_det_at(y, params, p);
    const double hi = log_det_at(y, params, p2);
    if (std::abs(lo - hi) <= 1e-12 * std::max(1.0, std::abs(hi))) return log_c_tm(params.T, params.M) + hi;
    p = 2 * p;
  }
}

double ustm_log_ratio(const UstmSample& sample, const SchemeParams& params) {
  if (params.scheme != Scheme::ustm) throw ConfigError("ustm_log_ratio: params are not USTM");
  params.validate();
  if (params.T == params.M) return 0.0;
  const DerivedConstants c = derive(params);
  if (c.alpha == 0.0) return 0.0;
  const Spectrum y = ustm_y_spectrum(sample, params);
  const double signal = c.alpha * (1.0 + params.rho * params.T / params.M) * sample.x1.squaredNorm();
  return kLog2e * (signal - ustm_log_avg_exp(y.values, params));
}

UstmSample sample_ustm(const SchemeParams& params, RngStream& rng) {
  params.validate();
  if (params.scheme != Scheme::ustm) throw ConfigError("sample_ustm: params are not USTM");
  return {sample_gaussian(params.M, params.N, rng), sample_gaussian(params.T - params.M, params.N, rng)};
}

}  // namespace ncmimo
