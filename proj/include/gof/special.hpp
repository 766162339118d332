#ifndef GOF_SPECIAL_HPP_
#define GOF_SPECIAL_HPP_

// Self-contained special-function kernel: regularized incomplete Beta
// function and its inverse, Beta density and moments, normal CDF and
// quantile. Everything here is a pure function of its arguments.

namespace gof::special {

// Shape parameters of a Beta(alpha, beta) distribution. Both must be
// positive; the library's own uses are always alpha = i, beta = n - i + 1
// for the i-th of n uniform order statistics.
struct BetaParams {
  double alpha;
  double beta;
};

struct BetaMoments {
  double mean;      // alpha / (alpha + beta)
  double variance;  // alpha*beta / ((alpha+beta)^2 (alpha+beta+1))
};

BetaMoments beta_moments(const BetaParams& p);

// log B(a, b)
double log_beta(double a, double b);

// Density of Beta(alpha, beta) at x in [0, 1].
double beta_pdf(double x, const BetaParams& p);

// Regularized incomplete Beta function I_x(alpha, beta).
// Exact 0 at x = 0 and exact 1 at x = 1; absolute error <= 1e-14 inside.
// Throws std::domain_error for x outside [0, 1] or nonpositive shapes.
double reg_inc_beta(double x, const BetaParams& p);

// Inverse of reg_inc_beta in x: returns x with |I_x(a,b) - q| <= 1e-13.
// Monotone nondecreasing in q; exact 0 at q = 0 and 1 at q = 1.
double inv_reg_inc_beta(double q, const BetaParams& p);

// Standard normal CDF, relative error <= 1e-9 (in practice ~1e-15).
double normal_cdf(double z);

// Standard normal quantile, inverse of normal_cdf to 1e-8 absolute.
// Throws std::domain_error at q <= 0 or q >= 1.
double normal_quantile(double q);

}  // namespace gof::special

#endif  // GOF_SPECIAL_HPP_
