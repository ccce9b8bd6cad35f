#include "ncmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "ncmimo/errors.hpp"

namespace ncmimo {

double Spectrum::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

double RngStream::normal() { return normal_(engine_); }

Complex RngStream::complex_normal() {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re * kHalf, im * kHalf};
}

ComplexMatrix sample_gaussian(int rows, int cols, RngStream& rng) {
  ComplexMatrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) out(i, j) = rng.complex_normal();
  return out;
}

ComplexMatrix sample_haar_unitary(int m, RngStream& rng) {
  const ComplexMatrix z = sample_gaussian(m, m, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& packed = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    const Complex r = packed(j, j);
    const double mag = std::abs(r);
    const Complex phase = mag > 0.0 ? r / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

namespace {

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

void sort_nonincreasing(std::vector<double>& v) { std::sort(v.begin(), v.end(), std::greater<>()); }

}  // namespace

Spectrum hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("hermitian_eigenvalues: matrix is not square");
  const double scale = std::max(1.0, max_abs(a));
  const double asym = max_abs(a - a.adjoint());
  if (asym > 1e-10 * scale) throw DomainError("hermitian_eigenvalues: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("hermitian_eigenvalues: solver failed");

  Spectrum s;
  s.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  for (double& v : s.values) {
    if (v < -1e-10 * scale)
      throw DomainError("hermitian_eigenvalues: matrix is not positive semidefinite");
    v = std::max(v, 0.0);
  }
  sort_nonincreasing(s.values);
  return s;
}

Spectrum singular_values(const ComplexMatrix& a) {
  Spectrum s;
  if (a.size() == 0) return s;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  s.values.assign(sv.data(), sv.data() + sv.size());
  sort_nonincreasing(s.values);
  return s;
}

LogDet equilibrated_log_det(RealMatrix a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DomainError("equilibrated_log_det: matrix is not square");
  LogDet out;
  if (n == 0) return out;

  double log_scale = 0.0;
  // Two sweeps of row then column power-of-two scaling.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = a.row(i).cwiseAbs().maxCoeff();
      if (!std::isfinite(m)) throw NumericError("equilibrated_log_det: non-finite entry");
      if (m == 0.0) return {-std::numeric_limits<double>::infinity(), 0, 0.0};
      int e = 0;
      std::frexp(m, &e);
      a.row(i) *= std::ldexp(1.0, -e);
      log_scale += e * std::log(2.0);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = a.col(j).cwiseAbs().maxCoeff();
      if (m == 0.0) return {-std::numeric_limits<double>::infinity(), 0, 0.0};
      int e = 0;
      std::frexp(m, &e);
      a.col(j) *= std::ldexp(1.0, -e);
      log_scale += e * std::log(2.0);
    }
  }

  Eigen::PartialPivLU<RealMatrix> lu(a);
  const RealMatrix& packed = lu.matrixLU();
  double log_abs = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = packed(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0, 0.0};
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  out.log_abs = log_abs + log_scale;
  out.sign = sign;
  out.rcond = lu.rcond();
  return out;
}

}  // namespace ncmimo
