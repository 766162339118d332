#ifndef GOF_ENGINE_HPP_
#define GOF_ENGINE_HPP_

#include <optional>
#include <span>
#include <vector>

#include "gof/stats.hpp"

// Exact p-value engine for supremum-based one-sided statistics.
//
// Every one-sided statistic of the form max_i g_i(u_(i)) with g_i
// decreasing reduces to a boundary-crossing event
//
//     Pr[ forall i: L_i <= U_(i) <= 1 ]
//
// over uniform order statistics. crossing_probability() evaluates that
// probability in O(n^2) time and O(n) memory by integrating the nested
// volume integral one variable at a time, carrying the intermediate
// polynomial in a translated-monomial basis with per-step exponent
// rescaling so the coefficients neither swamp each other nor underflow.

namespace gof {

// Per-index lower limits L_1..L_n of a crossing event.
struct BoundaryVector {
  std::vector<double> limits;
  bool monotonized = false;
  int n() const { return static_cast<int>(limits.size()); }
};

// Lower limits for Pr[statistic shows value c]. Supported kinds:
//   mn_plus  : L_i = Beta(i, n-i+1) quantile at c, c in [0,1]
//   ks_plus  : L_i = max(0, i/n - c/sqrt(n)), c >= 0
//   hc2004   : unique root of sqrt(n)(i/n - u)/sqrt(u(1-u)) = c, c >= 0
//   hc2008   : L_i = i/n - c sqrt(i (n-i)) / n^(3/2), i = n excluded
// HC truncation alpha0 < 1 leaves L_i = 0 for i > floor(alpha0 * n).
// mn_minus/ks_minus have no direct boundary here; their p-values use the
// reflection u -> 1-u under which their null law equals the plus variant.
BoundaryVector boundary_for(const StatisticKind& kind, int n, double c);

// Prefix maximum. The crossing event is unchanged because U_(i) is
// nondecreasing; the recursion's integral limits require ordered bounds.
BoundaryVector monotonize(BoundaryVector b);

// State of the translated-polynomial recursion after d integration
// steps: f_d(x) = c_{d,0} + sum_k c_{d,k} (x + t_{d,k})^k with shifts
// t_{d,k} = -L_{d-k+1}. The stored coefficients are the evaluation-form
// components g_{d,k} = c_{d,k} (1 + t_{d,k})^k whose plain sum is
// f_d(1). Each is carried as an extended-precision mantissa with its
// own integer binary exponent: coefficients routinely sit thousands of
// binary orders apart mid-recursion and later return to prominence, so
// no single hardware exponent window can hold them all. When rescaling
// is on, a common power of two is factored out after each step so the
// largest coefficient stays near 1; its log is accumulated and divided
// back out of the final probability.
class PolynomialState {
 public:
  explicit PolynomialState(bool rescale = true) : rescale_(rescale) {}

  // One integration step: f_d(t) = integral of f_{d-1} from next_limit to t.
  void advance(double next_limit);

  int degree() const { return static_cast<int>(limits_.size()); }
  long double max_abs_coeff() const;
  // Accumulated log of the rescaling factors a_1..a_d.
  long double log_scale() const { return log_scale_; }
  // Value at t = 1 of the rescaled polynomial (= f_d(1) * exp(log_scale)).
  long double scaled_value_at_one() const;
  // n! * f_n(1), assembled in log space and clamped to [0,1].
  double probability() const;

 private:
  // g_{d,k} = mant_[k] * 2^exp2_[k]; f_0 = 1
  std::vector<long double> mant_;
  std::vector<long long> exp2_;
  std::vector<long double> limits_;   // L_1..L_d
  std::vector<long double> inv_rem_;  // 1 / (1 - L_j), 0 when L_j == 1
  std::vector<long double> inv_k_;    // reciprocal table
  // scratch term buffers reused across steps
  std::vector<long double> tm_;
  std::vector<long long> te_;
  long double log_scale_ = 0.0L;
  bool rescale_;
};

// Pr[forall i: L_i <= U_(i) <= 1] for n i.i.d. U[0,1] order statistics.
// Monotonizes internally if needed. `rescale = false` disables the
// exponent fix (only safe for small n; kept for diagnostics).
double crossing_probability(const BoundaryVector& b, bool rescale = true);

// Exact p-value in the rejection direction of the statistic:
//   mn_plus / mn_minus : Pr[stat < c]  (small values reject), c in [0,1]
//   ks_plus / ks_minus / hc2004 / hc2008 : Pr[stat >= c] (large reject)
double one_sided_pvalue(const StatisticKind& kind, int n, double c);

struct PValueResult {
  std::optional<double> exact_one_sided;
  double two_sided_lower = 0.0;
  double two_sided_upper = 0.0;
  double two_sided_asymptotic = 0.0;
  enum class Method { exact, bounds, asymptotic } method = Method::exact;
};

// Two-sided p-value Pr[M_n <= c] via the sandwich
// 2q - q^2 <= Pr[M_n <= c] <= 2q with q = Pr[M_n+ <= c]; the asymptotic
// point estimate is the lower end, which is also the n -> infinity limit.
PValueResult two_sided_pvalue(int n, double c);

enum class Sided { one, two };

// Limit law of the rescaled statistic: 1 - exp(-x) one-sided,
// 1 - exp(-2x) two-sided, for x > 0.
double asymptotic_cdf(double x, Sided sided);

// Maps a raw threshold c to the limit argument x = c * 2 log n loglog n.
// Requires n >= 3 (loglog must be positive-definite).
double asymptotic_scale(int n);

// Asymptotic quantile of the supremum of the standardized empirical
// process: sqrt(2 loglog n) + logloglog n / (2 sqrt(2 loglog n))
//        + t / sqrt(2 loglog n).  Requires n >= 16.
double eicker_threshold(int n, double t);

// Threshold c with p-value alpha: exact engine inversion for one-sided
// kinds (bracket [0,1] for mn kinds, [0,sqrt(n)] for ks/hc); for the
// two-sided mn kind, inverts the asymptotic point estimate 2q - q^2
// (documented approximate). Bisection to |p - alpha| <= 1e-8.
double find_threshold(const StatisticKind& kind, int n, double alpha);

}  // namespace gof

#endif  // GOF_ENGINE_HPP_
