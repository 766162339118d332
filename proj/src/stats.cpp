#include "gof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gof/special.hpp"

namespace gof {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool is_one_sided(Statistic s) {
  switch (s) {
    case Statistic::mn_plus:
    case Statistic::mn_minus:
    case Statistic::ks_plus:
    case Statistic::ks_minus:
    case Statistic::hc2004:
    case Statistic::hc2008:
      return true;
    default:
      return false;
  }
}

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::mn_plus: return "mn_plus";
    case Statistic::mn_minus: return "mn_minus";
    case Statistic::mn: return "mn";
    case Statistic::ks_plus: return "ks_plus";
    case Statistic::ks_minus: return "ks_minus";
    case Statistic::ks: return "ks";
    case Statistic::hc2004: return "hc2004";
    case Statistic::hc2008: return "hc2008";
    case Statistic::ad: return "ad";
    case Statistic::ad_sup: return "ad_sup";
  }
  return "?";
}

Statistic parse_statistic(const std::string& name) {
  static const std::pair<const char*, Statistic> table[] = {
      {"mn_plus", Statistic::mn_plus},   {"mn_minus", Statistic::mn_minus},
      {"mn", Statistic::mn},             {"ks_plus", Statistic::ks_plus},
      {"ks_minus", Statistic::ks_minus}, {"ks", Statistic::ks},
      {"hc2004", Statistic::hc2004},     {"hc2008", Statistic::hc2008},
      {"ad", Statistic::ad},             {"ad_sup", Statistic::ad_sup},
  };
  for (const auto& [key, val] : table)
    if (name == key) return val;
  throw std::invalid_argument("unknown statistic: " + name);
}

NullModel NullModel::standard_normal() { return NullModel(Kind::standard_normal); }
NullModel NullModel::uniform() { return NullModel(Kind::uniform); }

NullModel NullModel::user_table(std::vector<double> xs, std::vector<double> Fs) {
  if (xs.size() != Fs.size() || xs.size() < 2)
    throw std::invalid_argument("user table needs >= 2 (x, F) rows");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]) || Fs[i] < Fs[i - 1])
      throw std::invalid_argument("user table must be strictly increasing in x, nondecreasing in F");
  for (double f : Fs)
    if (f < 0.0 || f > 1.0)
      throw std::invalid_argument("user table F values must lie in [0,1]");
  NullModel m(Kind::user_table);
  m.xs_ = std::move(xs);
  m.Fs_ = std::move(Fs);
  return m;
}

double NullModel::cdf(double x) const {
  switch (kind_) {
    case Kind::standard_normal:
      return special::normal_cdf(x);
    case Kind::uniform:
      return std::clamp(x, 0.0, 1.0);
    case Kind::user_table: {
      if (x < xs_.front() || x > xs_.back())
        throw std::domain_error("value outside the user table's x-range");
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return Fs_.back();
      const size_t j = it - xs_.begin();  // xs_[j-1] <= x < xs_[j]
      const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return Fs_[j - 1] + t * (Fs_[j] - Fs_[j - 1]);
    }
  }
  return 0.0;
}

double NullModel::quantile(double u) const {
  switch (kind_) {
    case Kind::standard_normal:
      return special::normal_quantile(u);
    case Kind::uniform:
      if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("quantile argument outside [0,1]");
      return u;
    case Kind::user_table: {
      if (u < Fs_.front() || u > Fs_.back())
        throw std::domain_error("quantile outside the user table's F-range");
      auto it = std::lower_bound(Fs_.begin(), Fs_.end(), u);
      size_t j = it - Fs_.begin();
      if (j == 0) return xs_.front();
      const double span = Fs_[j] - Fs_[j - 1];
      if (span <= 0.0) return xs_[j];
      const double t = (u - Fs_[j - 1]) / span;
      return xs_[j - 1] + t * (xs_[j] - xs_[j - 1]);
    }
  }
  return 0.0;
}

SortedUniformSample transform(std::span<const double> raw, const NullModel& model) {
  if (raw.empty()) throw std::invalid_argument("transform: empty sample");
  SortedUniformSample out;
  out.values.reserve(raw.size());
  for (double x : raw) out.values.push_back(model.cdf(x));
  std::sort(out.values.begin(), out.values.end());
  out.has_ties =
      std::adjacent_find(out.values.begin(), out.values.end()) != out.values.end();
  return out;
}

OrderPValues order_pvalues(const SortedUniformSample& s) {
  const int n = s.n();
  if (n == 0) throw std::invalid_argument("order_pvalues: empty sample");
  OrderPValues out;
  out.p.resize(n);
  for (int i = 1; i <= n; ++i)
    out.p[i - 1] = special::reg_inc_beta(
        s.values[i - 1], {static_cast<double>(i), static_cast<double>(n - i + 1)});
  return out;
}

MnResult mn_statistics(const OrderPValues& pv) {
  const int n = pv.n();
  if (n == 0) throw std::invalid_argument("mn_statistics: empty p-values");
  MnResult r{pv.p[0], 1.0 - pv.p[0], 0.0, 1, 1};
  for (int i = 1; i < n; ++i) {
    if (pv.p[i] < r.mn_plus) {
      r.mn_plus = pv.p[i];
      r.argmin_plus = i + 1;
    }
    if (1.0 - pv.p[i] < r.mn_minus) {
      r.mn_minus = 1.0 - pv.p[i];
      r.argmin_minus = i + 1;
    }
  }
  r.mn = std::min(r.mn_plus, r.mn_minus);
  return r;
}

KsResult ks_statistics(const SortedUniformSample& s) {
  const int n = s.n();
  if (n == 0) throw std::invalid_argument("ks_statistics: empty sample");
  const double dn = n;
  double dplus = -kInf, dminus = -kInf;
  for (int i = 1; i <= n; ++i) {
    const double u = s.values[i - 1];
    dplus = std::max(dplus, i / dn - u);
    dminus = std::max(dminus, u - (i - 1) / dn);
  }
  const double rn = std::sqrt(dn);
  KsResult r{rn * dplus, rn * dminus, 0.0};
  r.k = std::max(r.k_plus, r.k_minus);
  return r;
}

double hc_statistic(const SortedUniformSample& s, Statistic variant, double alpha0) {
  if (variant != Statistic::hc2004 && variant != Statistic::hc2008)
    throw std::invalid_argument("hc_statistic: variant must be hc2004 or hc2008");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    throw std::domain_error("hc_statistic: alpha0 must lie in (0,1]");
  const int n = s.n();
  if (n == 0) throw std::invalid_argument("hc_statistic: empty sample");
  const int imax = std::max(1, static_cast<int>(std::floor(alpha0 * n)));
  const double rn = std::sqrt(static_cast<double>(n));

  double best = -kInf;
  for (int i = 1; i <= imax; ++i) {
    const double u = s.values[i - 1];
    const double num = static_cast<double>(i) / n - u;
    double den2;
    if (variant == Statistic::hc2004) {
      den2 = u * (1.0 - u);
    } else {
      if (i == n) continue;  // zero denominator by construction
      den2 = (static_cast<double>(i) / n) * (1.0 - static_cast<double>(i) / n);
    }
    if (den2 <= 0.0) {
      if (num > 0.0) return kInf;
      continue;  // num <= 0 over a zero denominator: never the max
    }
    best = std::max(best, rn * num / std::sqrt(den2));
  }
  return best;
}

double ad_statistic(const SortedUniformSample& s) {
  const int n = s.n();
  if (n == 0) throw std::invalid_argument("ad_statistic: empty sample");
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double ui = s.values[i - 1];
    const double uj = s.values[n - i];  // u_(n+1-i)
    if (ui <= 0.0 || ui >= 1.0 || uj <= 0.0 || uj >= 1.0)
      throw std::domain_error("ad_statistic: sample value at 0 or 1, statistic diverges");
    acc += (2.0 * i - 1.0) * (std::log(ui) + std::log1p(-uj));
  }
  return -n - acc / n;
}

double adsup_statistic(const SortedUniformSample& s) {
  const int n = s.n();
  if (n == 0) throw std::invalid_argument("adsup_statistic: empty sample");
  const double rn = std::sqrt(static_cast<double>(n));
  double best = -kInf;
  bool any = false;
  for (int i = 1; i <= n; ++i) {
    const double u = s.values[i - 1];
    const double den2 = u * (1.0 - u);
    const double dev =
        std::max(std::fabs(static_cast<double>(i) / n - u),
                 std::fabs(static_cast<double>(i - 1) / n - u));
    if (den2 <= 0.0) {
      if (dev > 0.0) return kInf;
      continue;
    }
    best = std::max(best, rn * dev / std::sqrt(den2));
    any = true;
  }
  return any ? best : -kInf;
}

double evaluate_statistic(const SortedUniformSample& s, const StatisticKind& kind) {
  switch (kind.tag) {
    case Statistic::mn_plus:
      return mn_statistics(order_pvalues(s)).mn_plus;
    case Statistic::mn_minus:
      return mn_statistics(order_pvalues(s)).mn_minus;
    case Statistic::mn:
      return mn_statistics(order_pvalues(s)).mn;
    case Statistic::ks_plus:
      return ks_statistics(s).k_plus;
    case Statistic::ks_minus:
      return ks_statistics(s).k_minus;
    case Statistic::ks:
      return ks_statistics(s).k;
    case Statistic::hc2004:
    case Statistic::hc2008:
      return hc_statistic(s, kind.tag, kind.alpha0);
    case Statistic::ad:
      return ad_statistic(s);
    case Statistic::ad_sup:
      return adsup_statistic(s);
  }
  throw std::logic_error("evaluate_statistic: unhandled kind");
}

}  // namespace gof
