#ifndef GOF_BANDS_HPP_
#define GOF_BANDS_HPP_

#include <vector>

#include "gof/stats.hpp"

// Simultaneous Q-Q confidence bands: the sample stays inside the bands
// exactly when the two-sided M_n test accepts at level alpha, because
// M_n > c iff every u_(i) lies between the c and 1-c quantiles of its
// Beta(i, n-i+1) null law.

namespace gof {

struct BandRow {
  int i;
  double expected_x;  // null quantile of i/(n+1)
  double b;           // lower band in u-space
  double B;           // upper band in u-space
  double x_lower;     // bands mapped through the null quantile function
  double x_upper;
};

struct BandTable {
  int n = 0;
  double alpha = 0.0;
  double c_alpha = 0.0;         // two-sided threshold (asymptotic inversion)
  double coverage_lower = 0.0;  // rigorous bounds on the attained coverage
  double coverage_upper = 0.0;
  std::vector<BandRow> rows;
};

// c_alpha solves the asymptotic two-sided estimate 2q - q^2 = alpha; the
// attained coverage is only guaranteed inside [coverage_lower,
// coverage_upper] = [1 - 2q, 1 - 2q + q^2], which the table carries.
BandTable confidence_bands(int n, double alpha, const NullModel& model);

}  // namespace gof

#endif  // GOF_BANDS_HPP_
