#include "gof/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "gof/engine.hpp"
#include "gof/rng.hpp"
#include "gof/special.hpp"

namespace gof::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream-id layout: tag selects the purpose, index the cell/batch.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return make_stream(seed, (tag << 48) | index);
}
constexpr std::uint64_t kTagNullCalib = 0;
constexpr std::uint64_t kTagAlt = 1;
constexpr std::uint64_t kTagCellNull = 2;

double normal_draw(std::mt19937_64& g) {
  return special::normal_quantile(uniform01(g));
}

bool small_rejects(const TestSpec& t) {
  if (t.family != TestSpec::Family::statistic) return false;
  switch (t.kind.tag) {
    case Statistic::mn_plus:
    case Statistic::mn_minus:
    case Statistic::mn:
      return true;
    default:
      return false;
  }
}

bool has_exact_threshold(const TestSpec& t) {
  switch (t.family) {
    case TestSpec::Family::sum:
    case TestSpec::Family::max:
      return true;
    case TestSpec::Family::lr:
      return false;
    case TestSpec::Family::statistic:
      return is_one_sided(t.kind.tag);
  }
  return false;
}

// Statistic values for all tests on one replicate, sharing the sort and
// the per-index p-values across tests.
std::vector<double> eval_tests(const std::vector<TestSpec>& tests,
                               std::vector<double> raw,
                               const MixtureSpec& mix_for_lr) {
  double sum = 0.0, mx = -kInf;
  for (double x : raw) {
    sum += x;
    mx = std::max(mx, x);
  }

  bool need_sample = false;
  bool need_pvalues = false;
  bool need_lr = false;
  for (const auto& t : tests) {
    if (t.family == TestSpec::Family::statistic) {
      need_sample = true;
      if (t.kind.tag == Statistic::mn_plus || t.kind.tag == Statistic::mn_minus ||
          t.kind.tag == Statistic::mn)
        need_pvalues = true;
    }
    need_lr |= t.family == TestSpec::Family::lr;
  }
  const double lr_val = need_lr ? lr_statistic(raw, mix_for_lr) : 0.0;

  // Observations enter the GOF statistics through the upper-tail
  // transform u = Phi(-x): positive contamination lands near u = 0,
  // the rejection side of the one-sided statistics. Two-sided
  // statistics are unaffected in law (u and 1-u are exchangeable
  // under the null).
  SortedUniformSample su;
  if (need_sample) {
    for (double& v : raw) v = -v;
    std::sort(raw.begin(), raw.end());
    su.values.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
      su.values[i] = special::normal_cdf(raw[i]);
  }
  std::optional<MnResult> mn;
  if (need_pvalues) mn = mn_statistics(order_pvalues(su));
  std::optional<KsResult> ks;

  std::vector<double> out(tests.size());
  for (size_t j = 0; j < tests.size(); ++j) {
    const TestSpec& t = tests[j];
    switch (t.family) {
      case TestSpec::Family::sum:
        out[j] = sum;
        break;
      case TestSpec::Family::max:
        out[j] = mx;
        break;
      case TestSpec::Family::lr:
        out[j] = lr_val;
        break;
      case TestSpec::Family::statistic:
        switch (t.kind.tag) {
          case Statistic::mn_plus: out[j] = mn->mn_plus; break;
          case Statistic::mn_minus: out[j] = mn->mn_minus; break;
          case Statistic::mn: out[j] = mn->mn; break;
          case Statistic::ks_plus:
          case Statistic::ks_minus:
          case Statistic::ks:
            if (!ks) ks = ks_statistics(su);
            out[j] = t.kind.tag == Statistic::ks_plus    ? ks->k_plus
                     : t.kind.tag == Statistic::ks_minus ? ks->k_minus
                                                         : ks->k;
            break;
          default:
            out[j] = evaluate_statistic(su, t.kind);
        }
        break;
    }
  }
  return out;
}

struct Calibration {
  double threshold = 0.0;
  bool small_rejects = false;
  bool exact = false;
};

// Empirical alpha-quantile of the null scores in the rejection direction.
double mc_threshold(std::vector<double> nulls, double alpha, bool small) {
  const int N = static_cast<int>(nulls.size());
  int k = static_cast<int>(std::llround(alpha * N));
  k = std::clamp(k, 1, N);
  if (small) {
    std::nth_element(nulls.begin(), nulls.begin() + (k - 1), nulls.end());
    return nulls[k - 1];
  }
  std::nth_element(nulls.begin(), nulls.begin() + (N - k), nulls.end());
  return nulls[N - k];
}

Calibration calibrate(const TestSpec& t, int n, double alpha,
                      const std::vector<double>* null_scores) {
  Calibration c;
  c.small_rejects = small_rejects(t);
  if (has_exact_threshold(t)) {
    c.exact = true;
    switch (t.family) {
      case TestSpec::Family::sum:
        c.threshold = std::sqrt(static_cast<double>(n)) *
                      special::normal_quantile(1.0 - alpha);
        break;
      case TestSpec::Family::max:
        c.threshold =
            special::normal_quantile(std::pow(1.0 - alpha, 1.0 / n));
        break;
      default:
        c.threshold = find_threshold(t.kind, n, alpha);
    }
    return c;
  }
  if (!null_scores)
    throw std::logic_error("calibrate: Monte-Carlo threshold requested without nulls");
  c.threshold = mc_threshold(*null_scores, alpha, c.small_rejects);
  return c;
}

bool rejects(const Calibration& c, double stat) {
  return c.small_rejects ? stat <= c.threshold : stat >= c.threshold;
}

std::vector<double> draw_raw(const Alternative& alt, std::mt19937_64& g) {
  std::vector<double> x(alt.n());
  if (alt.kind == Alternative::Kind::variance) {
    for (double& v : x) v = alt.sigma * normal_draw(g);
    return x;
  }
  for (double& v : x) {
    const bool contaminated = uniform01(g) < alt.mix.epsilon;
    v = normal_draw(g) + (contaminated ? alt.mix.mu : 0.0);
  }
  return x;
}

// Misdetection rates for several tests sharing replicates and, for the
// Monte-Carlo-calibrated ones, a shared null batch.
std::vector<PowerResult> cell_powers(const std::vector<TestSpec>& tests,
                                     const Alternative& alt, double alpha,
                                     int reps, std::uint64_t seed,
                                     std::uint64_t cell_index) {
  const int n = alt.n();
  if (n < 1) throw std::invalid_argument("power: sample size must be >= 1");
  if (reps < 100) throw std::invalid_argument("power: needs reps >= 100");

  bool any_mc = false;
  for (const auto& t : tests) any_mc |= !has_exact_threshold(t);

  std::vector<std::vector<double>> null_scores(tests.size());
  if (any_mc) {
    const int reps_null = std::max(10 * reps, 2000);
    auto g = stream(seed, kTagCellNull, cell_index);
    Alternative null_alt = Alternative::variance(n, 1.0);
    std::vector<size_t> mc_idx;
    std::vector<TestSpec> mc_tests;
    for (size_t j = 0; j < tests.size(); ++j)
      if (!has_exact_threshold(tests[j])) {
        mc_idx.push_back(j);
        mc_tests.push_back(tests[j]);
        null_scores[j].reserve(reps_null);
      }
    for (int r = 0; r < reps_null; ++r) {
      auto vals = eval_tests(mc_tests, draw_raw(null_alt, g), alt.mix);
      for (size_t k = 0; k < mc_idx.size(); ++k)
        null_scores[mc_idx[k]].push_back(vals[k]);
    }
  }

  std::vector<Calibration> cal(tests.size());
  for (size_t j = 0; j < tests.size(); ++j)
    cal[j] = calibrate(tests[j], n, alpha,
                       null_scores[j].empty() ? nullptr : &null_scores[j]);

  std::vector<int> hits(tests.size(), 0);
  auto g = stream(seed, kTagAlt, cell_index);
  for (int r = 0; r < reps; ++r) {
    auto vals = eval_tests(tests, draw_raw(alt, g), alt.mix);
    for (size_t j = 0; j < tests.size(); ++j)
      if (rejects(cal[j], vals[j])) ++hits[j];
  }

  std::vector<PowerResult> out(tests.size());
  for (size_t j = 0; j < tests.size(); ++j) {
    PowerResult& p = out[j];
    p.power = static_cast<double>(hits[j]) / reps;
    p.se = std::sqrt(p.power * (1.0 - p.power) / reps);
    p.misdetection = 1.0 - p.power;
    p.threshold = cal[j].threshold;
    p.exact_threshold = cal[j].exact;
  }
  return out;
}

}  // namespace

std::string TestSpec::label() const {
  switch (family) {
    case Family::lr: return "lr";
    case Family::sum: return "sum";
    case Family::max: return "max";
    case Family::statistic: return statistic_name(kind.tag);
  }
  return "?";
}

std::vector<double> sample_mixture(const MixtureSpec& spec, std::mt19937_64& rng) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0))
    throw std::domain_error("sample_mixture: epsilon must lie in [0,1]");
  return draw_raw(Alternative::mixture(spec), rng);
}

std::vector<double> sample_alternative(const Alternative& alt, std::mt19937_64& rng) {
  return draw_raw(alt, rng);
}

double lr_statistic(std::span<const double> x, const MixtureSpec& spec) {
  const double eps = spec.epsilon;
  const double mu = spec.mu;
  double acc = 0.0;
  for (double xi : x) {
    const double t = mu * xi - 0.5 * mu * mu;
    if (t > 500.0)
      acc += t + std::log(eps + (1.0 - eps) * std::exp(-t));
    else
      acc += std::log1p(eps * std::expm1(t));
  }
  return acc;
}

PowerResult power_estimate(const TestSpec& test, const Alternative& alt,
                           double alpha, int reps, std::uint64_t seed) {
  if (test.family == TestSpec::Family::lr &&
      alt.kind != Alternative::Kind::mixture)
    throw std::invalid_argument("power_estimate: lr needs a mixture alternative");
  return cell_powers({test}, alt, alpha, reps, seed, 0)[0];
}

std::vector<RocCurve> roc_curves(const std::vector<TestSpec>& tests,
                                 const MixtureSpec& spec, int reps,
                                 std::uint64_t seed) {
  if (reps < 1000) throw std::invalid_argument("roc_curves: needs reps >= 1000");
  const size_t m = tests.size();
  std::vector<std::vector<double>> null_s(m), alt_s(m);
  for (auto& v : null_s) v.reserve(reps);
  for (auto& v : alt_s) v.reserve(reps);

  Alternative null_alt = Alternative::variance(spec.n, 1.0);
  Alternative alt = Alternative::mixture(spec);
  auto gn = stream(seed, kTagNullCalib, 0);
  auto ga = stream(seed, kTagAlt, 0);
  for (int r = 0; r < reps; ++r) {
    auto nv = eval_tests(tests, draw_raw(null_alt, gn), spec);
    auto av = eval_tests(tests, draw_raw(alt, ga), spec);
    for (size_t j = 0; j < m; ++j) {
      // orient scores so that larger = stronger evidence to reject
      const double flip = small_rejects(tests[j]) ? -1.0 : 1.0;
      null_s[j].push_back(flip * nv[j]);
      alt_s[j].push_back(flip * av[j]);
    }
  }

  std::vector<RocCurve> out(m);
  for (size_t j = 0; j < m; ++j) {
    out[j].test = tests[j].label();
    auto& nl = null_s[j];
    auto& al = alt_s[j];
    std::sort(nl.begin(), nl.end(), std::greater<>());
    std::sort(al.begin(), al.end(), std::greater<>());
    auto& pts = out[j].points;
    pts.reserve(reps + 2);
    pts.push_back({0.0, 0.0});
    size_t hi = 0;
    for (int k = 1; k <= reps; ++k) {
      while (hi < al.size() && al[hi] >= nl[k - 1]) ++hi;
      pts.push_back({static_cast<double>(k) / reps,
                     static_cast<double>(hi) / reps});
    }
    pts.push_back({1.0, 1.0});
  }
  return out;
}

WinnerMap winner_map(const SweepGrid& grid, int n, const std::vector<TestSpec>& tests) {
  if (grid.mu.empty() || grid.eps.empty())
    throw std::invalid_argument("winner_map: empty grid");
  if (tests.size() < 2)
    throw std::invalid_argument("winner_map: needs at least two tests");

  WinnerMap map;
  for (const auto& t : tests) map.tests.push_back(t.label());

  struct Cell {
    double mu, eps;
  };
  std::vector<Cell> cells;
  const double logn = std::log(static_cast<double>(n));
  for (double e : grid.eps)
    for (double m : grid.mu) {
      Cell c;
      c.eps = grid.scaled ? std::pow(static_cast<double>(n), -e) : e;
      c.mu = grid.scaled ? std::sqrt(2.0 * m * logn) : m;
      cells.push_back(c);
    }

  map.cells.resize(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& c = cells[idx];
      Alternative alt = Alternative::mixture({c.eps, c.mu, n});
      auto powers = cell_powers(tests, alt, grid.alpha, grid.reps, grid.seed,
                                static_cast<std::uint64_t>(idx));
      WinnerCell& out = map.cells[idx];
      out.mu = c.mu;
      out.eps = c.eps;
      out.misdetection.resize(tests.size());
      for (size_t j = 0; j < tests.size(); ++j)
        out.misdetection[j] = powers[j].misdetection;

      size_t best = 0;
      for (size_t j = 1; j < tests.size(); ++j)
        if (out.misdetection[j] < out.misdetection[best]) best = j;
      double ratio = kInf;
      for (size_t j = 0; j < tests.size(); ++j) {
        if (j == best) continue;
        const double r = out.misdetection[best] > 0.0
                             ? out.misdetection[j] / out.misdetection[best]
                             : (out.misdetection[j] > 0.0 ? kInf : 1.0);
        ratio = std::min(ratio, r);
      }
      out.winner = ratio > 1.1 ? static_cast<int>(best) : -1;
      out.strong = ratio > 1.5;
      out.in_band =
          out.misdetection[best] >= 0.001 && out.misdetection[best] <= 0.8;
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  const size_t nthreads =
      std::min<size_t>(std::max(1u, hw), cells.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return map;
}

double detection_boundary(double beta) {
  if (!(beta > 0.5 && beta < 1.0))
    throw std::domain_error("detection_boundary: beta must lie in (0.5, 1)");
  if (beta <= 0.75) return beta - 0.5;
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return s * s;
}

double first_order_statistic_cdf(double x, int n) {
  if (n < 1) throw std::invalid_argument("first_order_statistic_cdf: n >= 1");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-x));
}

double consistency_threshold(int n, double eps) {
  if (n <= 15 || eps < 0.0)
    throw std::domain_error("consistency_threshold: needs n > 15 and eps >= 0");
  const double ln = std::log(static_cast<double>(n));
  return 1.0 / (ln * std::pow(std::log(ln), 1.0 + eps));
}

}  // namespace gof::sim
