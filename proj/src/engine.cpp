#include "gof/engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "gof/special.hpp"

namespace gof {

namespace {

constexpr long double kLn2 = 0.6931471805599453094172321214581766L;

// Nonzero value m * 2^e with |m| normalized into [0.5, 1); the integer
// exponent removes every hardware range limit from the recursion.
struct XNum {
  long double m;
  long long e;
};

inline XNum xnorm(long double m, long long e) {
  if (m == 0.0L) return {0.0L, 0};
  int sh;
  m = std::frexp(m, &sh);
  return {m, e + sh};
}

// Product of two normalized values (|m| in [0.5,1)): the result mantissa
// lies in [0.25,1), so one conditional doubling renormalizes it without
// a frexp call.
inline XNum xmul(XNum a, XNum b) {
  long double m = a.m * b.m;
  long long e = a.e + b.e;
  if (std::fabs(m) < 0.5L) {
    m *= 2.0L;
    e -= 1;
  }
  return {m, e};
}

// x^k for x in (0, 1), exact exponent tracking. Mantissas are allowed to
// drift down to 2^-8000 between renormalizations: products then stay far
// above the hardware underflow limit and the renormalization branch is
// almost never taken.
inline XNum xpowi(long double x, unsigned k) {
  constexpr long double kTiny = 0x1p-8000L;
  long double rm = 1.0L, bm = x;
  long long re = 0, be = 0;
  while (k) {
    if (k & 1u) {
      rm *= bm;
      re += be;
      if (std::fabs(rm) < kTiny) {
        int sh;
        rm = std::frexp(rm, &sh);
        re += sh;
      }
    }
    k >>= 1;
    if (!k) break;
    bm *= bm;
    be += be;
    if (bm < kTiny) {
      int sh;
      bm = std::frexp(bm, &sh);
      be += sh;
    }
  }
  return xnorm(rm, re);
}

// Neumaier compensated accumulator.
struct Kahan {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  long double total() const { return sum + comp; }
};

// Compensated sum of a list of (mantissa, exponent) terms: anchor at the
// largest exponent, shift everything into that frame, accumulate with
// Neumaier compensation. Terms more than ~16000 binary orders below the
// anchor underflow harmlessly -- they are far beneath even the
// compensation word of the running sum.
inline XNum xsum(std::span<const long double> ms, std::span<const long long> es) {
  long long anchor = 0;
  bool any = false;
  for (size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] == 0.0L) continue;
    if (!any || es[i] > anchor) anchor = es[i];
    any = true;
  }
  if (!any) return {0.0L, 0};
  Kahan acc;
  for (size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] == 0.0L) continue;
    const long long de = es[i] - anchor;
    if (de < -16300) continue;
    acc.add(std::ldexp(ms[i], static_cast<int>(de)));
  }
  return xnorm(acc.total(), anchor);
}

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
}

int hc_index_cap(int n, double alpha0) {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    throw std::domain_error("alpha0 must lie in (0,1]");
  return std::max(1, static_cast<int>(std::floor(alpha0 * n)));
}

// Root of sqrt(n)(a - u)/sqrt(u(1-u)) = c with u <= a, in closed form.
double hc2004_limit(double a, double n, double c) {
  const double disc = c * std::sqrt(c * c + 4.0 * n * a * (1.0 - a));
  return (2.0 * a * n + c * c - disc) / (2.0 * (n + c * c));
}

}  // namespace

BoundaryVector boundary_for(const StatisticKind& kind, int n, double c) {
  check_n(n);
  BoundaryVector b;
  b.limits.assign(n, 0.0);
  const double dn = n;

  switch (kind.tag) {
    case Statistic::mn_plus: {
      if (!(c >= 0.0 && c <= 1.0))
        throw std::domain_error("boundary_for: mn_plus needs c in [0,1]");
      for (int i = 1; i <= n; ++i)
        b.limits[i - 1] = special::inv_reg_inc_beta(
            c, {static_cast<double>(i), static_cast<double>(n - i + 1)});
      b.monotonized = true;  // Beta quantiles at fixed c increase with i
      break;
    }
    case Statistic::ks_plus: {
      if (!(c >= 0.0)) throw std::domain_error("boundary_for: ks_plus needs c >= 0");
      const double shift = c / std::sqrt(dn);
      for (int i = 1; i <= n; ++i)
        b.limits[i - 1] = std::clamp(i / dn - shift, 0.0, 1.0);
      b.monotonized = true;
      break;
    }
    case Statistic::hc2004: {
      if (!(c >= 0.0)) throw std::domain_error("boundary_for: hc2004 needs c >= 0");
      const int imax = hc_index_cap(n, kind.alpha0);
      for (int i = 1; i <= imax; ++i)
        b.limits[i - 1] = std::clamp(hc2004_limit(i / dn, dn, c), 0.0, 1.0);
      break;
    }
    case Statistic::hc2008: {
      const int imax = std::min(hc_index_cap(n, kind.alpha0), n - 1);
      for (int i = 1; i <= imax; ++i) {
        const double a = i / dn;
        b.limits[i - 1] = std::clamp(a - c * std::sqrt(a * (1.0 - a) / dn), 0.0, 1.0);
      }
      break;
    }
    default:
      throw std::invalid_argument(
          "boundary_for: no direct boundary for this statistic (minus variants "
          "use the reflection identity)");
  }
  return b;
}

BoundaryVector monotonize(BoundaryVector b) {
  double running = 0.0;
  for (double& L : b.limits) {
    running = std::max(running, L);
    L = running;
  }
  b.monotonized = true;
  return b;
}

void PolynomialState::advance(double next_limit) {
  const long double Ld = next_limit;
  const int d = degree() + 1;

  // Coefficients are carried in evaluation form g_{d,k} =
  // c_{d,k} (1 + t_{d,k})^k = c_{d,k} (1 - L_{d-k+1})^k, so that
  // f_d(1) = sum_k g_{d,k}.
  //
  // Constant term: -sum_{k=2..d} c_{d-1,k-1}/k (L_d - L_{d-k+1})^k
  //   = -sum_k g_{d-1,k-1}/k (L_d - L_{d-k+1}) rho^(k-1),
  // with rho = (L_d - L_{d-k+1}) / (1 - L_{d-k+1}) in [0,1] for a
  // monotone boundary. It never references g_{d-1,0}, which is what
  // keeps the error growth of the plain recursion at bay. Every term
  // is kept: the sum cancels deeply, and dropping terms that look
  // negligible in isolation visibly corrupts the result at large n.
  tm_.assign(d + 1, 0.0L);
  te_.assign(d + 1, 0);
  while (inv_k_.size() < static_cast<size_t>(d) + 1)
    inv_k_.push_back(1.0L / static_cast<long double>(inv_k_.size()));
  const long double one_minus_Ld = 1.0L - Ld;
  long long anchor = LLONG_MIN;  // largest term exponent seen so far
  for (int k = 2; k <= d; ++k) {
    const long double gm = mant_[k - 1];
    if (gm == 0.0L) continue;
    const int j = d - k;  // L_{d-k+1} lives at index j
    const long double invr = inv_rem_[j];
    if (invr == 0.0L) continue;  // boundary saturated at 1
    // rho = (L_d - L_j) / (1 - L_j), division hoisted out of the loop
    const long double rho = 1.0L - one_minus_Ld * invr;
    if (rho <= 0.0L) continue;
    // A term whose exponent upper bound sits > 16300 binary orders below
    // the largest term would be dropped by the anchored sum regardless;
    // skipping it here is bit-identical and saves the power evaluation.
    if (anchor != LLONG_MIN) {
      const long long ub = static_cast<long long>(k - 1) *
                               (std::ilogb(rho) + 1LL) +
                           exp2_[k - 1] + 1;
      if (ub < anchor - 16300) continue;
    }
    const long double width = Ld - limits_[j];
    XNum t = xpowi(rho, static_cast<unsigned>(k - 1));
    t = xmul(t, xnorm(-gm * inv_k_[k] * width, exp2_[k - 1]));
    tm_[k] = t.m;
    te_[k] = t.e;
    if (t.m != 0.0L && t.e > anchor) anchor = t.e;
  }
  const XNum c0 = xsum(tm_, te_);

  if (mant_.empty()) {  // f_0 = 1
    mant_.push_back(0.5L);
    exp2_.push_back(1);
  }
  mant_.push_back(0.0L);
  exp2_.push_back(0);
  // g_{d,k} = g_{d-1,k-1} (1 - L_{d-k+1}) / k;  k = 1 references L_d
  for (int k = d; k >= 2; --k) {
    const XNum g = xnorm(mant_[k - 1] * ((1.0L - limits_[d - k]) /
                                         static_cast<long double>(k)),
                         exp2_[k - 1]);
    mant_[k] = g.m;
    exp2_[k] = g.e;
  }
  const XNum g1 = xnorm(mant_[0] * (1.0L - Ld), exp2_[0]);
  mant_[1] = g1.m;
  exp2_[1] = g1.e;
  mant_[0] = c0.m;
  exp2_[0] = c0.e;
  limits_.push_back(Ld);
  inv_rem_.push_back(one_minus_Ld > 0.0L ? 1.0L / one_minus_Ld : 0.0L);

  if (rescale_) {
    // factor a common power of two out of every coefficient so the
    // largest mantissa-exponent pair sits in [1/2, 1)
    long long top = 0;
    bool any = false;
    for (int k = 0; k <= d; ++k) {
      if (mant_[k] == 0.0L) continue;
      if (!any || exp2_[k] > top) top = exp2_[k];
      any = true;
    }
    if (any && top != 0) {
      for (int k = 0; k <= d; ++k)
        if (mant_[k] != 0.0L) exp2_[k] -= top;
      log_scale_ -= static_cast<long double>(top) * kLn2;  // log a_d
    }
  }
}

long double PolynomialState::max_abs_coeff() const {
  long double best = 0.0L;
  long long best_e = 0;
  for (size_t k = 0; k < mant_.size(); ++k) {
    if (mant_[k] == 0.0L) continue;
    if (best == 0.0L || exp2_[k] > best_e ||
        (exp2_[k] == best_e && std::fabs(mant_[k]) > best)) {
      best = std::fabs(mant_[k]);
      best_e = exp2_[k];
    }
  }
  if (best == 0.0L) return 0.0L;
  return std::ldexp(best, static_cast<int>(std::max<long long>(
                              std::min<long long>(best_e, 16000), -16400)));
}

long double PolynomialState::scaled_value_at_one() const {
  // evaluation-form coefficients sum directly to f_d(1)
  const XNum v = xsum(mant_, exp2_);
  if (v.m == 0.0L) return 0.0L;
  if (v.e > 16000) return v.m > 0.0L ? std::numeric_limits<long double>::max()
                                     : -std::numeric_limits<long double>::max();
  if (v.e < -16400) return 0.0L;
  return std::ldexp(v.m, static_cast<int>(v.e));
}

double PolynomialState::probability() const {
  const int n = degree();
  if (n < 1) throw std::logic_error("PolynomialState: no steps taken");
  const XNum v = xsum(mant_, exp2_);
  if (!(v.m > 0.0L)) return 0.0;  // empty event, or cancelled to roundoff
  const long double logp = std::lgamma(static_cast<long double>(n) + 1.0L) +
                           std::log(v.m) +
                           static_cast<long double>(v.e) * kLn2 - log_scale_;
  if (logp > 1e-6L)
    throw std::runtime_error("crossing_probability: precision loss (p > 1)");
  const double p = static_cast<double>(std::exp(logp));
  return std::clamp(p, 0.0, 1.0);
}

double crossing_probability(const BoundaryVector& b, bool rescale) {
  check_n(b.n());
  for (double L : b.limits)
    if (!(L >= 0.0 && L <= 1.0))
      throw std::domain_error("crossing_probability: limits must lie in [0,1]");

  const BoundaryVector* use = &b;
  BoundaryVector owned;
  if (!b.monotonized &&
      !std::is_sorted(b.limits.begin(), b.limits.end())) {
    owned = monotonize(b);
    use = &owned;
  }

  PolynomialState state(rescale);
  for (double L : use->limits) state.advance(L);
  return state.probability();
}

double one_sided_pvalue(const StatisticKind& kind, int n, double c) {
  check_n(n);
  switch (kind.tag) {
    case Statistic::mn_plus:
    case Statistic::mn_minus: {
      // Identical null laws: the reflection u -> 1-u swaps the variants.
      if (c <= 0.0) return 0.0;
      if (c >= 1.0) return 1.0;
      StatisticKind plus{Statistic::mn_plus, kind.alpha0};
      return 1.0 - crossing_probability(boundary_for(plus, n, c));
    }
    case Statistic::ks_plus:
    case Statistic::ks_minus: {
      if (c <= 0.0) return 1.0;
      StatisticKind plus{Statistic::ks_plus, kind.alpha0};
      return 1.0 - crossing_probability(boundary_for(plus, n, c));
    }
    case Statistic::hc2004:
      if (c < 0.0) throw std::domain_error("one_sided_pvalue: hc2004 needs c >= 0");
      return 1.0 - crossing_probability(boundary_for(kind, n, c));
    case Statistic::hc2008:
      return 1.0 - crossing_probability(boundary_for(kind, n, c));
    default:
      throw std::invalid_argument(
          "one_sided_pvalue: not a one-sided supremum statistic");
  }
}

PValueResult two_sided_pvalue(int n, double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::domain_error("two_sided_pvalue: c must lie in [0,1]");
  const double q = one_sided_pvalue({Statistic::mn_plus}, n, c);
  PValueResult r;
  r.exact_one_sided = q;
  r.two_sided_lower = 2.0 * q - q * q;
  r.two_sided_upper = std::min(2.0 * q, 1.0);
  r.two_sided_asymptotic = r.two_sided_lower;
  r.method = PValueResult::Method::bounds;
  return r;
}

double asymptotic_cdf(double x, Sided sided) {
  if (!(x > 0.0)) throw std::domain_error("asymptotic_cdf: x must be positive");
  return sided == Sided::one ? -std::expm1(-x) : -std::expm1(-2.0 * x);
}

double asymptotic_scale(int n) {
  if (n <= 2)
    throw std::domain_error("asymptotic_scale: needs n >= 3 (loglog n)");
  const double ln = std::log(static_cast<double>(n));
  return 2.0 * ln * std::log(ln);
}

double eicker_threshold(int n, double t) {
  if (n < 16)
    throw std::domain_error("eicker_threshold: needs n >= 16 (logloglog n)");
  const double ll = std::log(std::log(static_cast<double>(n)));
  const double root = std::sqrt(2.0 * ll);
  return root + std::log(ll) / (2.0 * root) + t / root;
}

double find_threshold(const StatisticKind& kind, int n, double alpha) {
  check_n(n);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("find_threshold: alpha must lie in (0,1)");

  StatisticKind target = kind;
  double want = alpha;
  if (kind.tag == Statistic::mn) {
    // Invert the asymptotic two-sided estimate: 2q - q^2 = alpha.
    target.tag = Statistic::mn_plus;
    want = 1.0 - std::sqrt(1.0 - alpha);
  }

  double lo, hi;
  bool increasing;  // direction of p(c)
  switch (target.tag) {
    case Statistic::mn_plus:
    case Statistic::mn_minus:
      lo = 0.0;
      hi = 1.0;
      increasing = true;
      break;
    case Statistic::ks_plus:
    case Statistic::ks_minus:
    case Statistic::hc2004:
    case Statistic::hc2008:
      lo = 0.0;
      hi = std::sqrt(static_cast<double>(n));
      increasing = false;
      break;
    default:
      throw std::invalid_argument(
          "find_threshold: no exact inversion for this statistic");
  }

  double plo = increasing ? 0.0 : one_sided_pvalue(target, n, lo);
  double phi = increasing ? 1.0 : one_sided_pvalue(target, n, hi);
  if ((want - plo) * (want - phi) > 0.0)
    throw std::runtime_error("find_threshold: alpha not bracketed in the c range");

  double c = 0.5 * (lo + hi), p = 0.0;
  for (int it = 0; it < 200; ++it) {
    c = 0.5 * (lo + hi);
    p = one_sided_pvalue(target, n, c);
    if (std::fabs(p - want) <= 1e-9) break;
    const bool go_up = increasing ? (p < want) : (p > want);
    if (go_up)
      lo = c;
    else
      hi = c;
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }
  if (std::fabs(p - want) > 1e-8)
    throw std::runtime_error("find_threshold: bisection failed to converge");
  return c;
}

}  // namespace gof
