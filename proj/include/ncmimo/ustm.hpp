#pragma once

#include <span>
#include <vector>

#include "ncmimo/bigreal.hpp"
#include "ncmimo/linalg.hpp"
#include "ncmimo/params.hpp"

namespace ncmimo {

/// USTM output in the frame of the transmitted subspace. x1 (M x N) is the signal part
/// divided by sqrt(1 + rho T / M), so both blocks have unit-variance entries.
struct UstmSample {
  ComplexMatrix x1;
  ComplexMatrix x2;  // (T - M) x N
};

/// Squared singular values of X = [sqrt(1 + rho T / M) X1; X2], the K = min(T, N) largest.
Spectrum ustm_y_spectrum(const UstmSample& sample, const SchemeParams& params);

/// The M x M Hankel matrix F of the Stiefel average, with entries divided by
/// exp(alpha y_1). Row-major; log_offset = M alpha y_1 restores det F.
struct HankelF {
  int dim = 0;
  std::vector<BigReal> entries;
  double log_offset = 0.0;
  unsigned digits = 0;
};

/// Builds F at `digits` decimal digits. y needs K = min(T, N) values; exact ties are
/// separated by a relative 1e-9 * index perturbation first.
HankelF hankel_f(std::span<const double> y, const SchemeParams& params, unsigned digits);

/// log prod_{k=1}^M (T-k)! / (M-k)!
double log_c_tm(int T, int M);

/// log < exp(alpha Tr(X^H Phi Phi^H X)) > over T x M isotropic Phi, given the squared
/// singular values y of X. The working precision is chosen from the spread of alpha y and
/// confirmed by re-evaluation with 20 more digits; doubles until the two agree.
double ustm_log_avg_exp(std::span<const double> y, const SchemeParams& params);

/// Digits chosen for the first evaluation of ustm_log_avg_exp.
unsigned ustm_initial_digits(std::span<const double> y, const SchemeParams& params);

/// Per-sample log2 of p(X | H marginalized) / p(X) for the USTM output.
double ustm_log_ratio(const UstmSample& sample, const SchemeParams& params);

UstmSample sample_ustm(const SchemeParams& params, RngStream& rng);

}  // namespace ncmimo
