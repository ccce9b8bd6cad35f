#include "ncmimo/confluent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ncmimo/errors.hpp"
#include "ncmimo/linalg.hpp"
#include "ncmimo/specialfn.hpp"

namespace ncmimo {

BigReal FunctionFamily::value_big(int, int, double, unsigned) const {
  throw CapabilityError("function family has no extended-precision evaluation");
}

namespace {

struct Cluster {
  double center = 0.0;
  int count = 0;
};

std::vector<Cluster> cluster_points(std::span<const double> points, double tol) {
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<Cluster> out;
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    const bool joins = i > 0 && (x == prev || std::abs(prev - x) <= tol * std::max(std::abs(prev), std::abs(x)));
    if (!joins) {
      if (i > 0) out.back().center = sum / out.back().count;
      out.push_back({x, 0});
      sum = 0.0;
    }
    sum += x;
    ++out.back().count;
    prev = x;
  }
  if (!out.empty()) out.back().center = sum / out.back().count;
  return out;
}

}  // namespace

DetRatio confluent_log_det_ratio(std::span<const double> points, const FunctionFamily& family,
                                 double tol) {
  const int n = family.size();
  if (static_cast<int>(points.size()) != n) {
    throw DomainError("confluent_log_det_ratio: expected " + std::to_string(n) + " points, got " +
                      std::to_string(points.size()));
  }
  DetRatio out;
  if (n == 0) return out;

  const std::vector<Cluster> clusters = cluster_points(points, tol);
  out.clusters = static_cast<int>(clusters.size());
  for (const Cluster& c : clusters) {
    if (c.count - 1 > family.max_derivative()) {
      throw CapabilityError("confluent_log_det_ratio: " + std::to_string(c.count) +
                            " coincident points need derivative order " +
                            std::to_string(c.count - 1) + ", family supports " +
                            std::to_string(family.max_derivative()));
    }
  }

  // Numerator.
  RealMatrix num(n, n);
  double log_scale = 0.0;
  {
    int col = 0;
    for (const Cluster& c : clusters) {
      log_scale += c.count * family.log_scale(c.center);
      for (int p = 0; p < c.count; ++p, ++col)
        for (int i = 0; i < n; ++i) num(i, col) = family.value(i, p, c.center);
    }
  }
  LogDet det;
  bool finite = num.allFinite();
  if (finite) {
    det = equilibrated_log_det(num);
    finite = std::isfinite(det.log_abs);
  }
  if (!finite || det.rcond < 1e-12) {
    const unsigned digits =
        40 + static_cast<unsigned>(det.rcond > 0.0 ? std::ceil(-std::log10(det.rcond)) : 40.0);
    try {
      std::vector<BigReal> big;
      big.reserve(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i) {
        for (const Cluster& c : clusters)
          for (int p = 0; p < c.count; ++p) big.push_back(family.value_big(i, p, c.center, digits));
      }
      const BigLogDet bd = big_log_det(std::move(big), n);
      det.log_abs = bd.log_abs;
      det.sign = bd.sign;
      out.extended = true;
    } catch (const CapabilityError&) {
      if (!finite) throw NumericError("confluent_log_det_ratio: non-finite numerator determinant");
    }
  }
  if (det.sign == 0 || !std::isfinite(det.log_abs)) {
    throw NumericError("confluent_log_det_ratio: singular numerator determinant");
  }

  // Confluent Vandermonde denominator; clusters are in decreasing order so every
  // (z_b - z_a), a < b, is negative.
  double log_den = 0.0;
  long long negative_factors = 0;
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (int p = 2; p < clusters[a].count; ++p) log_den += log_factorial(p);
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      const long long kk = static_cast<long long>(clusters[a].count) * clusters[b].count;
      log_den += kk * std::log(clusters[a].center - clusters[b].center);
      negative_factors += kk;
    }
  }
  const int den_sign = (negative_factors % 2 == 0) ? 1 : -1;

  out.log_abs = det.log_abs + log_scale - log_den;
  out.sign = det.sign * den_sign;
  return out;
}

double confluent_det_ratio(std::span<const double> points, const FunctionFamily& family,
                           double tol) {
  const DetRatio r = confluent_log_det_ratio(points, family, tol);
  return r.sign * std::exp(r.log_abs);
}

double scaled_bessel_power(int nu, double y) {
  if (!(y >= 0.0)) throw DomainError("scaled_bessel_power: negative argument");
  const int m = std::abs(nu);
  const int pos = std::max(nu, 0);
  if (y == 0.0) return nu > 0 ? 0.0 : std::exp(-log_factorial(m));
  const double z = 2.0 * std::sqrt(y);
  if (z > 30.0) return std::exp(0.5 * nu * std::log(y)) * scaled_bessel_i(m, z);
  // e^{-z} sum_k y^{k+pos} / (k! (k+m)!)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 500; ++k) {
    term *= y / ((k + 1.0) * (k + m + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(pos * std::log(y) - log_factorial(m) - z) * sum;
}

double BesselPowerFamily::log_scale(double y) const { return 2.0 * std::sqrt(y); }

double BesselPowerFamily::value(int row, int order, double y) const {
  return scaled_bessel_power(offset_ + row - order, y);
}

BigReal BesselPowerFamily::value_big(int row, int order, double y, unsigned digits) const {
  const int nu = offset_ + row - order;
  const int m = std::abs(nu);
  const int pos = std::max(nu, 0);
  const BigReal yb(y, digits);
  BigReal inv_m_fact(1L, digits);
  for (int j = 2; j <= m; ++j) inv_m_fact /= BigReal(static_cast<long>(j), digits);
  if (y == 0.0) return nu > 0 ? BigReal(digits) : inv_m_fact;
  // sum_k y^{k+pos} / (k! (k+m)!) with all terms positive.
  BigReal term = pow(yb, pos) * inv_m_fact;
  BigReal sum(term);
  const BigReal tiny = pow(BigReal(10L, digits), -static_cast<long>(digits) - 5);
  for (long k = 0; k < 1000000; ++k) {
    term *= yb;
    term /= BigReal((k + 1) * (k + m + 1), digits);
    sum += term;
    if (static_cast<double>(k) > y && term < sum * tiny) break;
  }
  return sum * exp(-(sqrt(yb) * BigReal(2L, digits)));
}

}  // namespace ncmimo
