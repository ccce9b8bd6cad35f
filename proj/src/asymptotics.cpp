#include "ncmimo/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "ncmimo/errors.hpp"
#include "ncmimo/linalg.hpp"
#include "ncmimo/specialfn.hpp"
#include "ncmimo/ustm.hpp"

namespace ncmimo {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxExactRank = 16;

cpp_int factorial(int n) {
  cpp_int out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

cpp_rational harmonic_exact(int n) {
  cpp_rational out = 0;
  for (int i = 1; i <= n; ++i) out += cpp_rational(1, i);
  return out;
}

double to_double(const cpp_rational& x) { return x.convert_to<double>(); }

void check_rank(int M, int N, const char* what) {
  if (M < 1 || N < 1) throw DomainError(std::string(what) + ": M and N must be positive");
  if (std::min(M, N) > kMaxExactRank) {
    throw CapabilityError(std::string(what) + ": min(M, N) > " + std::to_string(kMaxExactRank) +
                          " is not supported");
  }
}

// Coefficients of L_k^Q(x) in powers of x.
std::vector<cpp_rational> laguerre_coefficients(int k, int q) {
  std::vector<cpp_rational> c(k + 1);
  for (int i = 0; i <= k; ++i) {
    c[i] = cpp_rational(binomial(k + q, k - i), factorial(i));
    if (i % 2) c[i] = -c[i];
  }
  return c;
}

std::vector<cpp_rational> poly_mul(const std::vector<cpp_rational>& a, const std::vector<cpp_rational>& b) {
  std::vector<cpp_rational> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}


}  // namespace

double dustm_low_snr(const SchemeParams& params) {
  params.validate();
  const double r = params.rho;
  return r * r * params.N * (1.0 - 2.0 * r + 0.5 * r * r * (5.0 - static_cast<double>(params.N) / params.M)) * kLog2e;
}

double ustm_low_snr(const SchemeParams& params) {
  params.validate();
  const double r = params.rho;
  const double T = params.T;
  const double M = params.M;
  return params.N * r * r / (2.0 * M) * (T - M) * (1.0 - 2.0 * r * T / (3.0 * M) * (1.0 + M / T)) * kLog2e;
}

double l1(int M, int N) {
  check_rank(M, N, "l1");
  const int R = std::min(M, N);
  const int Q = std::abs(M - N);
  cpp_rational weight = 0;    // sum of coefficients
  cpp_rational weighted = 0;  // sum of coefficients times H_{Q+k+m}
  auto add = [&](const cpp_int& sign_binomials, int k, int m) {
    const cpp_rational c(sign_binomials * factorial(Q + k + m), factorial(k) * factorial(m));
    weight += c;
    weighted += c * harmonic_exact(Q + k + m);
  };
  for (int k = 0; k < R; ++k)
    for (int m = 0; m < R; ++m) {
      const cpp_int b = binomial(Q + R - 1, R - 1 - k) * binomial(Q + R, R - 1 - m);
      add((k + m) % 2 ? cpp_int(-b) : b, k, m);
    }
  for (int k = 0; k <= R; ++k)
    for (int m = 0; m <= R - 2; ++m) {
      const cpp_int b = binomial(Q + R, R - k) * binomial(Q + R - 1, R - 2 - m);
      add((k + m) % 2 ? b : cpp_int(-b), k, m);
    }
  const cpp_rational pref(factorial(R - 1), factorial(R + Q - 1));
  return (to_double(pref * weighted) - kEulerGamma * to_double(pref * weight)) * kLog2e;
}

double l2(int M, int N) {
  check_rank(M, N, "l2");
  const int R = std::min(M, N);
  if (R < 2) throw DomainError("l2: needs min(M, N) >= 2");
  const int Q = std::abs(M - N);
  // Pair density lambda1^Q lambda2^Q e^{-l1-l2} (mu11 mu22 - mu12^2) with mu expanded in
  // monomials: sum_{a,b} D_ab l1^{Q+a} l2^{Q+b} e^{-l1-l2}. Then
  // int int x^{Q+a} y^{Q+b} e^{-x-y} ln(x+y) = (Q+a)!(Q+b)! psi(2Q+a+b+2).
  std::vector<cpp_rational> w(R);
  std::vector<std::vector<cpp_rational>> lag(R);
  for (int k = 0; k < R; ++k) {
    w[k] = cpp_rational(factorial(k), factorial(k + Q));
    lag[k] = laguerre_coefficients(k, Q);
  }
  const int deg = 2 * (R - 1) + 1;
  std::vector<std::vector<std::vector<cpp_rational>>> c(R, std::vector<std::vector<cpp_rational>>(R));
  for (int j = 0; j < R; ++j)
    for (int k = 0; k < R; ++k) {
      c[j][k] = poly_mul(lag[j], lag[k]);
      c[j][k].resize(deg);
    }
  std::vector<cpp_rational> p(deg);
  for (int a = 0; a < deg; ++a)
    for (int j = 0; j < R; ++j) p[a] += w[j] * c[j][j][a];

  std::vector<cpp_rational> harm(2 * Q + 2 * deg + 2);
  for (std::size_t n = 1; n < harm.size(); ++n) harm[n] = harm[n - 1] + cpp_rational(1, static_cast<long>(n));

  cpp_rational total = 0;
  cpp_rational with_h = 0;
  for (int a = 0; a < deg; ++a)
    for (int b = 0; b < deg; ++b) {
      cpp_rational d = p[a] * p[b];
      for (int j = 0; j < R; ++j)
        for (int k = 0; k < R; ++k) d -= w[j] * w[k] * c[j][k][a] * c[j][k][b];
      if (d == 0) continue;
      const cpp_rational kfac = d * cpp_rational(factorial(Q + a) * factorial(Q + b));
      total += kfac;
      with_h += kfac * harm[2 * Q + a + b + 1];
    }
  if (total != R * (R - 1)) throw NumericError("l2: pair density normalization mismatch");
  return (to_double(with_h / total) - kEulerGamma) * kLog2e;
}

HighSnrConstants high_snr_constants(const SchemeParams& params) {
  const int T = params.T, M = params.M, N = params.N;
  if (M < 1 || N < 1 || T < 1) throw ConfigError("high_snr_constants: T, M, N must be positive");
  const int R = std::min(M, N);
  HighSnrConstants h;
  h.l1 = l1(M, N);
  h.l2_valid = R >= 2;
  if (h.l2_valid) h.l2 = l2(M, N);

  double sum_log2_fact = 0.0;
  for (int k = M - R; k < M; ++k) sum_log2_fact += log_factorial(k) * kLog2e;
  h.a_mn = 0.5 * R * std::log2(4.0 * std::numbers::pi) -
           R * (M - 0.5 * R) * std::log2(2.0 * std::numbers::e) - sum_log2_fact +
           R * (M - R + 0.5) * h.l1 + 0.5 * R * (R - 1) * h.l2;

  if (T >= M) {
    h.log2_ctm = log_c_tm(T, M) * kLog2e;
    const int K = std::min(T, N);
    if (M > N) {
      const int g = M - K;
      RealMatrix G = RealMatrix::Zero(g, g);
      for (int m = 1; m <= g; ++m)
        for (int n = 1; n <= g; ++n)
          if (m + n <= T - K + 1) G(m - 1, n - 1) = std::exp(-log_factorial(T - K - m - n + 1));
      const LogDet d = equilibrated_log_det(G);
      if (d.sign == 0) throw NumericError("high_snr_constants: singular G matrix");
      h.log2_abs_det_g = d.log_abs * kLog2e;
    }
    h.identically_zero = T == M;
    if (!h.identically_zero) {
      h.b_tmn = R * (T - M) * (std::log2(static_cast<double>(T) / (M * std::numbers::e)) + h.l1) -
                h.log2_ctm - h.log2_abs_det_g;
    }
  }
  return h;
}

double dustm_high_snr(const SchemeParams& params) {
  params.validate();
  const int M = params.M;
  const int R = params.R();
  const HighSnrConstants h = high_snr_constants(params);
  return (R * (M - 0.5 * R) * std::log2(params.rho) + h.a_mn) / M;
}

double ustm_high_snr(const SchemeParams& params) {
  params.validate();
  if (params.T == params.M) return 0.0;
  const HighSnrConstants h = high_snr_constants(params);
  return (params.R() * (params.T - params.M) * std::log2(params.rho) + h.b_tmn) / params.T;
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::monte_carlo: return "mc";
    case Estimator::high_snr: return "high_snr";
    case Estimator::low_snr: return "low_snr";
  }
  return "mc";
}

Estimator parse_estimator(std::string_view text) {
  if (text == "mc") return Estimator::monte_carlo;
  if (text == "high_snr") return Estimator::high_snr;
  if (text == "low_snr") return Estimator::low_snr;
  throw ConfigError("unknown method '" + std::string(text) + "' (expected mc, high_snr or low_snr)");
}

namespace {

struct Point {
  double value = 0.0;
  double se = 0.0;
};

Point evaluate(const SchemeParams& p, Estimator estimator, const RunSpec& run) {
  switch (estimator) {
    case Estimator::high_snr:
      return {p.scheme == Scheme::dustm ? dustm_high_snr(p) : ustm_high_snr(p), 0.0};
    case Estimator::low_snr:
      return {p.scheme == Scheme::dustm ? dustm_low_snr(p) : ustm_low_snr(p), 0.0};
    case Estimator::monte_carlo: {
      const MIEstimate e = estimate_mi(p, run);
      return {e.normalized, e.std_error};
    }
  }
  return {};
}

}  // namespace

std::vector<CapacityRow> capacity_curves(int T, int N, std::span<const double> rhos,
                                         Estimator estimator, const RunSpec& run) {
  if (T < 2 || T % 2 != 0) throw ConfigError("capacity_curves: T must be even and at least 2");
  if (N < 1) throw ConfigError("capacity_curves: N must be positive");
  std::vector<CapacityRow> out;
  out.reserve(rhos.size());
  for (double rho : rhos) {
    CapacityRow row;
    row.rho = rho;
    const Point d = evaluate({Scheme::dustm, T, T / 2, N, rho}, estimator, run);
    row.c_dustm = d.value;
    row.c_dustm_se = d.se;
    row.c_ustm = -std::numeric_limits<double>::infinity();
    for (int M = 1; M <= T; ++M) {
      const Point u = evaluate({Scheme::ustm, T, M, N, rho}, estimator, run);
      row.ustm_by_m.push_back(u.value);
      if (u.value > row.c_ustm) {
        row.c_ustm = u.value;
        row.c_ustm_se = u.se;
        row.m_opt = M;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

EigDensity::EigDensity(int M, int N) : r_(std::min(M, N)), q_(std::abs(M - N)) {
  if (M < 1 || N < 1) throw DomainError("eig_density: M and N must be positive");
}

EigDensity eig_density(int M, int N) { return EigDensity(M, N); }

double EigDensity::mu2_direct(double a, double b) const {
  double out = 0.0;
  for (int k = 0; k < r_; ++k)
    out += std::exp(log_factorial(k) - log_factorial(k + q_)) * laguerre(k, q_, a) * laguerre(k, q_, b);
  return out;
}

double EigDensity::mu2(double a, double b) const {
  const double scale = std::exp(log_factorial(r_) - log_factorial(r_ + q_ - 1));
  if (std::abs(a - b) <= 1e-7 * std::max({1.0, std::abs(a), std::abs(b)})) {
    const double x = 0.5 * (a + b);
    const double second = r_ >= 2 ? laguerre(r_, q_, x) * laguerre(r_ - 2, q_ + 1, x) : 0.0;
    return scale * (laguerre(r_ - 1, q_, x) * laguerre(r_ - 1, q_ + 1, x) - second);
  }
  return scale *
         (laguerre(r_ - 1, q_, a) * laguerre(r_, q_, b) - laguerre(r_, q_, a) * laguerre(r_ - 1, q_, b)) /
         (a - b);
}

double EigDensity::single(double lambda) const {
  if (lambda < 0.0) return 0.0;
  if (lambda == 0.0) return q_ == 0 ? mu2(0.0, 0.0) / r_ : 0.0;
  const double weight = std::exp(q_ * std::log(lambda) - lambda);
  return weight == 0.0 ? 0.0 : weight * mu2(lambda, lambda) / r_;
}

double EigDensity::pair(double a, double b) const {
  if (r_ < 2 || a < 0.0 || b < 0.0) return 0.0;
  const double weight = (a == 0.0 || b == 0.0) ? (q_ == 0 ? std::exp(-a - b) : 0.0)
                                               : std::exp(q_ * (std::log(a) + std::log(b)) - a - b);
  const double m12 = mu2(a, b);
  return weight * (mu2(a, a) * mu2(b, b) - m12 * m12) / (r_ * (r_ - 1.0));
}

double EigDensity::integrate(const std::function<double(double)>& g) const {
  const double split = q_ + r_ + 40.0;
  auto f = [&](double x) {
    const double d = single(x);
    return d == 0.0 ? 0.0 : d * g(x);
  };
  boost::math::quadrature::tanh_sinh<double> head;
  boost::math::quadrature::exp_sinh<double> tail;
  return head.integrate(f, 0.0, split) + tail.integrate(f, split, std::numeric_limits<double>::infinity());
}

double EigDensity::normalization() const {
  return integrate([](double) { return 1.0; });
}

double EigDensity::mean() const {
  return integrate([](double x) { return x; });
}

double EigDensity::expected_log2() const {
  return integrate([](double x) { return x > 0.0 ? std::log2(x) : 0.0; });
}

}  // namespace ncmimo
