#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ncmimo {

enum class Scheme { ustm, dustm };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

inline constexpr double kLog2e = 1.4426950408889634;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Coherence block length T, antenna counts M (transmit) and N (receive), and the
/// linear total SNR rho. A plain value type; call validate() before use.
struct SchemeParams {
  Scheme scheme = Scheme::ustm;
  int T = 1;
  int M = 1;
  int N = 1;
  double rho = 0.0;

  int R() const;  // min(M, N)
  int K() const;  // min(T, N)
  int Q() const;  // max(M, N) - min(M, N)

  /// Throws ConfigError if the parameters violate the scheme constraints.
  /// rho == 0 is accepted as the zero-SNR limit.
  void validate() const;

  /// Divisor that turns bits per block into bits/sec/Hz: M for DUSTM, T for USTM.
  int normalization() const;

  bool operator==(const SchemeParams&) const = default;
};

struct DerivedConstants {
  double alpha = 0.0;  // rho T / (M + rho T)
  double beta = 0.0;   // rho / (1 + 2 rho)
  double log2e = kLog2e;
};

DerivedConstants derive(const SchemeParams& params);

double snr_db_to_linear(double db);
double snr_linear_to_db(double rho);

/// Monte Carlo mutual-information estimate.
struct MIEstimate {
  double bits_per_block = 0.0;
  double normalized = 0.0;  // bits/sec/Hz
  double std_error = 0.0;   // standard error of `normalized`
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::int64_t failed = 0;  // samples rejected with a numeric error

  bool operator==(const MIEstimate&) const = default;
};

}  // namespace ncmimo
