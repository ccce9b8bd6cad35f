#pragma once

#include <span>

#include "ncmimo/linalg.hpp"
#include "ncmimo/params.hpp"

namespace ncmimo {

/// One DUSTM channel output split into its two M x N halves.
struct DustmSample {
  ComplexMatrix x1;
  ComplexMatrix x2;
};

/// Adjacent sqrt(y) values closer than 1e-6 (relative) are treated as coincident.
/// Expressed as a relative gap in y: 1 - (1 - 1e-6)^2.
inline constexpr double kDustmClusterTol = 1.999999e-6;

/// y_j = beta^2 s_j^2 for the R = min(M, N) largest singular values s_j of X2 X1^H.
Spectrum dustm_y_spectrum(const DustmSample& sample, double beta);

/// log < exp(beta Tr(A U + A^H U^H)) >_U over Haar U(M), as a function of the eigenvalues
/// y of beta^2 A^H A (at most M of them; missing ones are zero). Order of y is irrelevant.
/// Coincident values go through derivative columns.
double log_generating_functional(std::span<const double> y, int M);

/// Per-sample log2 of p(X | H marginalized) / p(X) for the DUSTM output.
double dustm_log_ratio(const DustmSample& sample, const SchemeParams& params);

/// Draw X1, X2 from the DUSTM output law (signal from the antipodal pair).
DustmSample sample_dustm(const SchemeParams& params, RngStream& rng);

}  // namespace ncmimo
