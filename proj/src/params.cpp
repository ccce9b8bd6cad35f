#include "ncmimo/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncmimo/errors.hpp"

namespace ncmimo {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::dustm ? "dustm" : "ustm";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "ustm") return Scheme::ustm;
  if (text == "dustm") return Scheme::dustm;
  throw ConfigError("unknown scheme '" + std::string(text) + "' (expected ustm or dustm)");
}

int SchemeParams::R() const { return std::min(M, N); }
int SchemeParams::K() const { return std::min(T, N); }
int SchemeParams::Q() const { return std::max(M, N) - std::min(M, N); }

void SchemeParams::validate() const {
  if (T < 1 || M < 1 || N < 1) {
    throw ConfigError("T, M and N must be positive (got T=" + std::to_string(T) +
                      ", M=" + std::to_string(M) + ", N=" + std::to_string(N) + ")");
  }
  if (!std::isfinite(rho) || rho < 0.0) {
    throw ConfigError("rho must be finite and nonnegative");
  }
  if (scheme == Scheme::dustm && T != 2 * M) {
    throw ConfigError("DUSTM requires T = 2M (got T=" + std::to_string(T) +
                      ", M=" + std::to_string(M) + ")");
  }
  if (scheme == Scheme::ustm && T < M) {
    throw ConfigError("USTM requires T >= M (got T=" + std::to_string(T) +
                      ", M=" + std::to_string(M) + ")");
  }
}

int SchemeParams::normalization() const { return scheme == Scheme::dustm ? M : T; }

DerivedConstants derive(const SchemeParams& params) {
  params.validate();
  DerivedConstants c;
  const double rt = params.rho * params.T;
  c.alpha = rt / (params.M + rt);
  c.beta = params.rho / (1.0 + 2.0 * params.rho);
  return c;
}

double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double snr_linear_to_db(double rho) { return 10.0 * std::log10(rho); }

}  // namespace ncmimo
