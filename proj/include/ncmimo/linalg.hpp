#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ncmimo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Nonnegative values sorted nonincreasing (eigenvalues or singular values).
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const;
  bool operator==(const Spectrum&) const = default;
};

/// Random stream for one Monte Carlo sample or one oracle run. Streams are keyed by
/// (seed, stream id) so that results do not depend on how work is split across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double normal();           // N(0, 1)
  Complex complex_normal();  // CN(0, 1): real and imaginary parts each N(0, 1/2)
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream keys.
std::uint64_t mix64(std::uint64_t x);

ComplexMatrix sample_gaussian(int rows, int cols, RngStream& rng);

/// Haar-distributed m x m unitary: QR of a CN(0,1) matrix with the phases of diag(R)
/// moved into Q.
ComplexMatrix sample_haar_unitary(int m, RngStream& rng);

/// Eigenvalues of a Hermitian positive semidefinite matrix, sorted nonincreasing.
/// Negative eigenvalues down to -1e-10 (relative to the matrix scale) are clamped to zero;
/// anything more negative, or a non-Hermitian input, throws DomainError.
Spectrum hermitian_eigenvalues(const ComplexMatrix& a);

/// Singular values, sorted nonincreasing; min(rows, cols) of them.
Spectrum singular_values(const ComplexMatrix& a);

struct LogDet {
  double log_abs = 0.0;  // natural log of |det|; -inf for a singular matrix
  int sign = 1;          // +1, -1, or 0 for singular
  double rcond = 1.0;    // reciprocal condition estimate after equilibration
};

/// Log-determinant after scaling rows and columns by powers of two so every row and
/// column has unit max-norm. The scaling is exact and folded back into log_abs.
LogDet equilibrated_log_det(RealMatrix a);

}  // namespace ncmimo
