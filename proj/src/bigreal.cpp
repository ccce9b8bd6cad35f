#include "ncmimo/bigreal.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "ncmimo/errors.hpp"

namespace ncmimo {

unsigned BigReal::bits_for_digits(unsigned digits) {
  return static_cast<unsigned>(std::ceil(digits * 3.3219280948873623)) + 8;
}

BigReal::BigReal(unsigned digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(double value, unsigned digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigReal::BigReal(long value, unsigned digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

unsigned BigReal::digits() const {
  return static_cast<unsigned>(std::floor((mpfr_get_prec(value_) - 8) / 3.3219280948873623));
}

double BigReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

double BigReal::log_abs() const {
  if (mpfr_zero_p(value_)) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
  return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

int BigReal::sign() const { return mpfr_sgn(value_); }
bool BigReal::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool BigReal::is_finite() const { return mpfr_number_p(value_) != 0; }

std::string BigReal::to_string(int significant) const {
  char* text = nullptr;
  mpfr_asprintf(&text, "%.*Rg", significant, value_);
  std::string out(text);
  mpfr_free_str(text);
  return out;
}

void BigReal::widen_to(const BigReal& other) {
  if (mpfr_get_prec(other.value_) > mpfr_get_prec(value_))
    mpfr_prec_round(value_, mpfr_get_prec(other.value_), MPFR_RNDN);
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  widen_to(rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  widen_to(rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  widen_to(rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  widen_to(rhs);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

BigReal exp(const BigReal& x) {
  BigReal out(x);
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("BigReal log of a nonpositive value");
  BigReal out(x);
  mpfr_log(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw DomainError("BigReal sqrt of a negative value");
  BigReal out(x);
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigReal abs(const BigReal& x) {
  BigReal out(x);
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigReal pow(const BigReal& x, long n) {
  BigReal out(x);
  mpfr_pow_si(out.value_, x.value_, n, MPFR_RNDN);
  return out;
}

BigLogDet big_log_det(std::vector<BigReal> a, int n) {
  if (static_cast<int>(a.size()) != n * n) throw DomainError("big_log_det: size mismatch");
  BigLogDet out;
  if (n == 0) return {0.0, 1};
  int sign = 1;
  double log_abs = 0.0;
  BigReal factor(a[0]);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (mpfr_cmpabs(a[r * n + col].raw(), a[pivot * n + col].raw()) > 0) pivot = r;
    }
    if (a[pivot * n + col].is_zero()) return {-std::numeric_limits<double>::infinity(), 0};
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      sign = -sign;
    }
    const BigReal& p = a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      if (a[r * n + col].is_zero()) continue;
      factor = a[r * n + col];
      factor /= p;
      for (int c = col + 1; c < n; ++c) {
        BigReal t(a[col * n + c]);
        t *= factor;
        a[r * n + c] -= t;
      }
    }
    if (p.sign() < 0) sign = -sign;
    log_abs += p.log_abs();
  }
  out.log_abs = log_abs;
  out.sign = sign;
  return out;
}

}  // namespace ncmimo
