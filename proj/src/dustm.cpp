#include "ncmimo/dustm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ncmimo/confluent.hpp"
#include "ncmimo/errors.hpp"
#include "ncmimo/specialfn.hpp"

namespace ncmimo {

namespace {

std::string describe(std::span<const double> y) {
  std::ostringstream os;
  os.precision(17);
  os << "y = [";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
  os << "]";
  return os.str();
}

}  // namespace

Spectrum dustm_y_spectrum(const DustmSample& sample, double beta) {
  if (sample.x1.rows() != sample.x2.rows() || sample.x1.cols() != sample.x2.cols()) {
    throw DomainError("dustm_y_spectrum: X1 and X2 must have the same shape");
  }
  const int m = static_cast<int>(sample.x1.rows());
  const int r = std::min(m, static_cast<int>(sample.x1.cols()));
  const Spectrum s = singular_values(sample.x2 * sample.x1.adjoint());
  Spectrum y;
  y.values.resize(r);
  for (int i = 0; i < r; ++i) y.values[i] = beta * beta * s[i] * s[i];
  return y;
}

double log_generating_functional(std::span<const double> y_in, int M) {
  const int r = static_cast<int>(y_in.size());
  if (M < 1 || r > M) throw DomainError("log_generating_functional: need 1 <= M and len(y) <= M");
  double ymax = 0.0;
  for (double v : y_in) {
    if (!std::isfinite(v)) throw NumericError("log_generating_functional: non-finite " + describe(y_in));
    if (v < 0.0) throw DomainError("log_generating_functional: negative " + describe(y_in));
    ymax = std::max(ymax, v);
  }
  if (ymax == 0.0) return 0.0;

  // Exact zeros among positive values make both determinants vanish; the ratio is
  // continuous there, so lift them to a negligible positive value.
  const double floor = std::max(ymax * 1e-24, 1e-290);
  std::vector<double> y(y_in.begin(), y_in.end());
  for (double& v : y) v = std::max(v, floor);

  const int d = M - r;
  const BesselPowerFamily family(r, d);
  DetRatio ratio;
  try {
    ratio = confluent_log_det_ratio(y, family, kDustmClusterTol);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + "; " + describe(y_in));
  }
  if (ratio.sign <= 0 || !std::isfinite(ratio.log_abs)) {
    throw NumericError("log_generating_functional: non-positive determinant ratio; " + describe(y_in));
  }
  double out = ratio.log_abs;
  for (int k = d; k < M; ++k) out += log_factorial(k);
  for (double v : y) out -= d * std::log(v);
  return out;
}

double dustm_log_ratio(const DustmSample& sample, const SchemeParams& params) {
  if (params.scheme != Scheme::dustm) throw ConfigError("dustm_log_ratio: params are not DUSTM");
  const DerivedConstants c = derive(params);
  if (sample.x1.rows() != params.M || sample.x1.cols() != params.N || sample.x2.rows() != params.M ||
      sample.x2.cols() != params.N) {
    throw DomainError("dustm_log_ratio: sample shape does not match M x N");
  }
  if (c.beta == 0.0) return 0.0;
  const double trace = 2.0 * (sample.x1.conjugate().cwiseProduct(sample.x2)).sum().real();
  const Spectrum y = dustm_y_spectrum(sample, c.beta);
  return kLog2e * (c.beta * trace - log_generating_functional(y.values, params.M));
}

DustmSample sample_dustm(const SchemeParams& params, RngStream& rng) {
  params.validate();
  if (params.scheme != Scheme::dustm) throw ConfigError("sample_dustm: params are not DUSTM");
  const ComplexMatrix zp = sample_gaussian(params.M, params.N, rng);
  const ComplexMatrix zm = sample_gaussian(params.M, params.N, rng);
  const double a = std::sqrt(2.0 * (1.0 + 2.0 * params.rho)) / 2.0;
  const double b = std::sqrt(2.0) / 2.0;
  return {a * zp + b * zm, a * zp - b * zm};
}

}  // namespace ncmimo
