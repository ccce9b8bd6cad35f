#pragma once

#include <string>
#include <vector>

#include <mpfr.h>

namespace ncmimo {

/// Extended-precision real backed by MPFR. Precision is given in decimal digits at
/// construction; binary operations produce a result at the larger operand precision.
class BigReal {
 public:
  explicit BigReal(unsigned digits = 50);
  BigReal(double value, unsigned digits);
  BigReal(long value, unsigned digits);
  BigReal(int value, unsigned digits) : BigReal(static_cast<long>(value), digits) {}

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static unsigned bits_for_digits(unsigned digits);

  unsigned digits() const;
  double to_double() const;
  /// Natural log of |x| as a double; finite for any nonzero value regardless of exponent.
  double log_abs() const;
  int sign() const;
  bool is_zero() const;
  bool is_finite() const;
  std::string to_string(int significant = 20) const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal operator-() const;

  friend BigReal operator+(BigReal lhs, const BigReal& rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, const BigReal& rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, const BigReal& rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, const BigReal& rhs) { return lhs /= rhs; }

  friend bool operator<(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, const BigReal& b);

  friend BigReal exp(const BigReal& x);
  friend BigReal log(const BigReal& x);
  friend BigReal sqrt(const BigReal& x);
  friend BigReal abs(const BigReal& x);
  friend BigReal pow(const BigReal& x, long n);

  mpfr_srcptr raw() const { return value_; }
  mpfr_ptr raw() { return value_; }

 private:
  void widen_to(const BigReal& other);

  mpfr_t value_;
};

/// log|det A| of an n x n row-major matrix by Gaussian elimination with partial pivoting.
struct BigLogDet {
  double log_abs = 0.0;
  int sign = 0;
};
BigLogDet big_log_det(std::vector<BigReal> a, int n);

}  // namespace ncmimo
