#ifndef GOF_STATS_HPP_
#define GOF_STATS_HPP_

#include <span>
#include <string>
#include <vector>

// Transform raw observations under a null CDF and compute the test
// statistics: the exact Berk-Jones family M_n+/M_n-/M_n, the one- and
// two-sided Kolmogorov-Smirnov statistics, both Higher Criticism
// variants, the Anderson-Darling L2 statistic and its sup-norm variant.

namespace gof {

enum class Statistic {
  mn_plus,
  mn_minus,
  mn,
  ks_plus,
  ks_minus,
  ks,
  hc2004,
  hc2008,
  ad,
  ad_sup,
};

// A statistic together with its tuning parameter. alpha0 is the HC
// truncation fraction (index range 1..floor(alpha0*n)); ignored by the
// other statistics.
struct StatisticKind {
  Statistic tag = Statistic::mn;
  double alpha0 = 1.0;
};

bool is_one_sided(Statistic s);
const char* statistic_name(Statistic s);
// Parses the names accepted by the CLI ("mn_plus", "hc2004", ...).
Statistic parse_statistic(const std::string& name);

// The transformed, sorted observations u_(1) <= ... <= u_(n), all in
// [0,1]. has_ties records duplicates seen during the transform; the
// statistics are still computed (continuity is the caller's assumption).
struct SortedUniformSample {
  std::vector<double> values;
  bool has_ties = false;
  int n() const { return static_cast<int>(values.size()); }
};

// Null distribution for the probability integral transform. The user
// table is a strictly increasing grid of (x, F(x)) pairs interpolated
// piecewise-linearly (shape preserving).
class NullModel {
 public:
  enum class Kind { standard_normal, uniform, user_table };

  static NullModel standard_normal();
  static NullModel uniform();
  static NullModel user_table(std::vector<double> xs, std::vector<double> Fs);

  Kind kind() const { return kind_; }
  double cdf(double x) const;
  // Inverse CDF; for the user table, inverse interpolation on the grid.
  double quantile(double u) const;

 private:
  NullModel(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> xs_, Fs_;
};

// Probability integral transform plus sort. Throws on empty input and
// on values outside a user table's x-range.
SortedUniformSample transform(std::span<const double> raw, const NullModel& model);

// Per-index one-sided p-values p_(i) = I_{u_(i)}(i, n-i+1), the CDF of
// the i-th order statistic's Beta(i, n-i+1) null law at u_(i).
struct OrderPValues {
  std::vector<double> p;
  int n() const { return static_cast<int>(p.size()); }
};

OrderPValues order_pvalues(const SortedUniformSample& s);

// M_n+ = min_i p_(i), M_n- = min_i (1 - p_(i)), M_n = min of the two.
// argmin indices are 1-based, the smallest index attaining each minimum.
struct MnResult {
  double mn_plus;
  double mn_minus;
  double mn;
  int argmin_plus;
  int argmin_minus;
};

MnResult mn_statistics(const OrderPValues& pv);

struct KsResult {
  double k_plus;   // sqrt(n) max_i (i/n - u_(i))
  double k_minus;  // sqrt(n) max_i (u_(i) - (i-1)/n)
  double k;        // max of the two
};

KsResult ks_statistics(const SortedUniformSample& s);

// Higher Criticism over indices 1..floor(alpha0*n). variant selects the
// denominator: u_(i)(1-u_(i)) for hc2004, (i/n)(1-i/n) for hc2008 (which
// drops i = n, where the denominator vanishes). A zero hc2004 denominator
// with positive numerator yields +infinity; the result is never NaN. If
// no index yields a finite term the result is -infinity.
double hc_statistic(const SortedUniformSample& s, Statistic variant,
                    double alpha0 = 1.0);

// Anderson-Darling statistic with the variance weight 1/(x(1-x)),
// via the closed form -n - (1/n) sum (2i-1)(ln u_(i) + ln(1-u_(n+1-i))).
// Throws if any u_(i) is exactly 0 or 1 (the integral diverges there).
double ad_statistic(const SortedUniformSample& s);

// Sup-norm Anderson-Darling: two-sided supremum of
// sqrt(n)|F^_n(u) - u| / sqrt(u(1-u)) over the 2n jump candidates.
double adsup_statistic(const SortedUniformSample& s);

// Dispatcher used by the CLI and the simulation harness.
double evaluate_statistic(const SortedUniformSample& s, const StatisticKind& kind);

}  // namespace gof

#endif  // GOF_STATS_HPP_
