#include "gof/bands.hpp"

#include <stdexcept>

#include "gof/engine.hpp"
#include "gof/special.hpp"

namespace gof {

BandTable confidence_bands(int n, double alpha, const NullModel& model) {
  if (n < 1) throw std::invalid_argument("confidence_bands: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("confidence_bands: alpha must lie in (0,1)");

  BandTable t;
  t.n = n;
  t.alpha = alpha;
  t.c_alpha = find_threshold({Statistic::mn}, n, alpha);

  const double q = one_sided_pvalue({Statistic::mn_plus}, n, t.c_alpha);
  t.coverage_lower = 1.0 - 2.0 * q;
  t.coverage_upper = 1.0 - 2.0 * q + q * q;

  t.rows.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const special::BetaParams bp{static_cast<double>(i),
                                 static_cast<double>(n - i + 1)};
    BandRow row;
    row.i = i;
    row.expected_x = model.quantile(static_cast<double>(i) / (n + 1));
    row.b = special::inv_reg_inc_beta(t.c_alpha, bp);
    row.B = special::inv_reg_inc_beta(1.0 - t.c_alpha, bp);
    row.x_lower = model.quantile(row.b);
    row.x_upper = model.quantile(row.B);
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace gof
