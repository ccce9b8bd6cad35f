#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "ncmimo/mc.hpp"
#include "ncmimo/params.hpp"

namespace ncmimo {

/// Small-rho expansions, normalized bits/sec/Hz.
double dustm_low_snr(const SchemeParams& params);
double ustm_low_snr(const SchemeParams& params);

/// E[log2 lambda] for a nonzero eigenvalue of Z Z^H, Z an M x N CN(0,1) matrix.
/// Exact rational accumulation; CapabilityError for min(M, N) > 16.
double l1(int M, int N);

/// E[log2(lambda_i + lambda_j)] for two distinct nonzero eigenvalues. DomainError when
/// min(M, N) < 2, CapabilityError for min(M, N) > 16.
double l2(int M, int N);

struct HighSnrConstants {
  double a_mn = 0.0;            // DUSTM constant (bits)
  double b_tmn = 0.0;           // USTM constant (bits); 0 when T == M
  double l1 = 0.0;
  double l2 = 0.0;              // 0 unless l2_valid
  bool l2_valid = false;        // min(M, N) >= 2
  double log2_ctm = 0.0;
  double log2_abs_det_g = 0.0;  // 0 when M <= N
  bool identically_zero = false;  // USTM with T == M
};

/// Constants of the high-SNR expansions for (T, M, N). The scheme field is ignored;
/// b_tmn is filled for T >= M.
HighSnrConstants high_snr_constants(const SchemeParams& params);

/// (1/M) [R(M - R/2) log2 rho + A_MN]
double dustm_high_snr(const SchemeParams& params);
/// (1/T) [R(T - M) log2 rho + B_TMN]; exactly 0 for T == M.
double ustm_high_snr(const SchemeParams& params);

enum class Estimator { monte_carlo, high_snr, low_snr };
std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view text);

struct CapacityRow {
  double rho = 0.0;
  double c_dustm = 0.0;
  double c_dustm_se = 0.0;
  double c_ustm = 0.0;
  double c_ustm_se = 0.0;
  int m_opt = 1;
  std::vector<double> ustm_by_m;  // index M - 1
};

/// C_DUSTM = I_DUSTM(T, T/2, N) and C_USTM = max over M = 1..T of I_USTM(T, M, N) for each
/// rho; ties in the maximum go to the smaller M. T must be even. Monte Carlo runs use
/// `run` for every point.
std::vector<CapacityRow> capacity_curves(int T, int N, std::span<const double> rhos,
                                         Estimator estimator, const RunSpec& run);

/// Eigenvalue densities of the M x N Wishart ensemble (nonzero eigenvalues only).
class EigDensity {
 public:
  EigDensity(int M, int N);

  int R() const { return r_; }
  int Q() const { return q_; }

  /// sum_{k<R} k!/(k+Q)! L_k^Q(a) L_k^Q(b)
  double mu2_direct(double a, double b) const;
  /// Same kernel by the Christoffel-Darboux identity (diagonal form when a == b).
  double mu2(double a, double b) const;

  /// One-point density, integrates to 1.
  double single(double lambda) const;
  /// Two-point density of an ordered pair of distinct eigenvalues; 0 when R < 2.
  double pair(double a, double b) const;

  /// Quadrature of single(lambda) * g(lambda) over [0, inf).
  double integrate(const std::function<double(double)>& g) const;
  double normalization() const;
  double mean() const;
  double expected_log2() const;

 private:
  int r_;
  int q_;
};

EigDensity eig_density(int M, int N);

}  // namespace ncmimo
