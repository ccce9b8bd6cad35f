#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ncmimo/dustm.hpp"
#include "ncmimo/linalg.hpp"
#include "ncmimo/params.hpp"
#include "ncmimo/ustm.hpp"

namespace ncmimo {

/// Running mean and variance (Welford), mergeable with Chan's pairwise update.
class Welford {
 public:
  void add(double x);
  void merge(const Welford& other);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased; 0 for fewer than two samples
  double std_error() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct RunSpec {
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Failures above this fraction of the requested samples abort a run.
inline constexpr double kMaxFailureRate = 1e-3;

struct SampleStatistics {
  Welford stats;
  std::int64_t failed = 0;
  std::string first_failure;
};

/// Evaluates fn(index, rng) for index = 0..samples-1, where rng is the stream keyed by
/// (seed, index). Work is split into fixed blocks and merged in index order, so the result
/// is identical for any worker count. NumericError and DomainError from fn mark the sample
/// as failed; too many failures throw NumericError.
using SampleFn = std::function<double(std::int64_t index, RngStream& rng)>;
SampleStatistics run_samples(const RunSpec& spec, const SampleFn& fn);

/// Monte Carlo estimate of the mutual information (per block and normalized).
/// Throws ConfigError for invalid parameters or fewer than 100 samples.
MIEstimate estimate_mi(const SchemeParams& params, const RunSpec& spec);

/// Per-sample log ratio (bits) for either scheme, drawing one output from rng.
double sample_log_ratio(const SchemeParams& params, RngStream& rng);

/// Sample mean of 2^{-log ratio}; equals 1 in expectation for a correct density ratio.
Welford normalization_check(const SchemeParams& params, const RunSpec& spec);

// Reference oracles used to validate the closed forms.

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// < exp(beta Tr(A U + A^H U^H)) > over Haar U(m), m = A.rows(), by direct sampling.
OracleEstimate haar_average_oracle(const ComplexMatrix& a, double beta, std::int64_t samples,
                                   std::uint64_t seed);

/// < exp(alpha Tr(X^H Phi Phi^H X)) > over T x M isotropic Phi (first M columns of a
/// Haar unitary of size T = X.rows()).
OracleEstimate stiefel_average_oracle(const ComplexMatrix& x, int M, double alpha,
                                      std::int64_t samples, std::uint64_t seed);

/// Draws H and W and forms X = sqrt(rho T / M) Phi_0 H + W for the canonical transmitted
/// signal, returned in the sample layout used by the scheme.
using ChannelSample = std::variant<DustmSample, UstmSample>;
ChannelSample channel_oracle_sample(const SchemeParams& params, RngStream& rng);

struct MomentCheck {
  std::string name;
  double deviation = 0.0;  // |mean - expected|
  double tolerance = 0.0;
  bool passed = false;
};

/// First, second and selected third moments of Haar U(m) samples against exact values.
std::vector<MomentCheck> unitary_moment_suite(int m, std::int64_t samples, std::uint64_t seed);

/// Monte Carlo estimates of E[log2 lambda] and E[log2(lambda_i + lambda_j)], i != j, for
/// the nonzero eigenvalues of Z Z^H with Z an M x N CN(0,1) matrix.
struct WishartLogMoments {
  OracleEstimate l1;
  OracleEstimate l2;
};
WishartLogMoments wishart_log_moments(int M, int N, std::int64_t samples, std::uint64_t seed);

}  // namespace ncmimo
