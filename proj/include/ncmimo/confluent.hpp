#pragma once

#include <span>
#include <vector>

#include "ncmimo/bigreal.hpp"

namespace ncmimo {

/// Rows of a generalized determinant det[f_i(x_j)]. Implementations supply each f_i and
/// its derivatives; a per-point scale may be removed from a whole column to keep entries
/// O(1) (the scale is added back in log space).
class FunctionFamily {
 public:
  virtual ~FunctionFamily() = default;

  virtual int size() const = 0;
  /// Highest derivative order `value` can produce.
  virtual int max_derivative() const = 0;
  /// Natural log of the factor removed from every entry of a column at x.
  virtual double log_scale(double /*x*/) const { return 0.0; }
  /// f_row^{(order)}(x) * exp(-log_scale(x)).
  virtual double value(int row, int order, double x) const = 0;
  /// Same quantity in extended precision. The default throws CapabilityError.
  virtual BigReal value_big(int row, int order, double x, unsigned digits) const;
};

struct DetRatio {
  double log_abs = 0.0;  // log |det f / Vandermonde|
  int sign = 1;
  int clusters = 0;      // distinct points after merging
  bool extended = false; // numerator determinant was redone in BigReal
};

/// det[f_i(x_j)] / prod_{i<j}(x_j - x_i) for the given points. Adjacent points (after
/// sorting) whose relative gap is at most `tol` are merged at their mean; a merged group
/// of k points contributes the columns f, f', ..., f^{(k-1)} and the denominator becomes
/// the confluent Vandermonde prod_a prod_{p<k_a} p! * prod_{a<b} (z_b - z_a)^{k_a k_b}.
/// The numerator is recomputed in BigReal when the double determinant is non-finite or
/// its reciprocal condition falls below 1e-12, if the family supports it.
DetRatio confluent_log_det_ratio(std::span<const double> points, const FunctionFamily& family,
                                 double tol);

/// Signed value of confluent_log_det_ratio.
double confluent_det_ratio(std::span<const double> points, const FunctionFamily& family,
                           double tol);

/// Rows y^{c_i/2} e^{-2 sqrt y} I_{c_i}(2 sqrt y) with c_i = offset + i, i = 0..rows-1.
/// The derivative of order p is the same expression at c_i - p (with I_{-m} = I_m), so
/// derivatives are exact. Column scale is 2 sqrt(y).
class BesselPowerFamily final : public FunctionFamily {
 public:
  BesselPowerFamily(int rows, int offset) : rows_(rows), offset_(offset) {}

  int size() const override { return rows_; }
  int max_derivative() const override { return 64; }
  double log_scale(double y) const override;
  double value(int row, int order, double y) const override;
  BigReal value_big(int row, int order, double y, unsigned digits) const override;

 private:
  int rows_;
  int offset_;
};

/// y^{nu/2} e^{-2 sqrt y} I_{|nu|}(2 sqrt y), finite at y = 0 for every integer nu.
double scaled_bessel_power(int nu, double y);

}  // namespace ncmimo
