#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gof/bands.hpp"
#include "gof/engine.hpp"
#include "gof/stats.hpp"

using namespace gof;

TEST_CASE("confidence_bands: n = 1 uniform quantile case") {
  // alpha chosen so that the two-sided threshold lands on c = 0.025:
  // at n = 1 the one-sided p-value is the identity, so 2c - c^2 = alpha.
  const double alpha = 2 * 0.025 - 0.025 * 0.025;
  auto t = confidence_bands(1, alpha, NullModel::uniform());
  CHECK(t.c_alpha == doctest::Approx(0.025).epsilon(1e-7));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].b == doctest::Approx(0.025).epsilon(1e-7));
  CHECK(t.rows[0].B == doctest::Approx(0.975).epsilon(1e-7));
  CHECK(t.rows[0].expected_x == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("confidence_bands: structure, symmetry, coverage bounds") {
  const int n = 60;
  auto t = confidence_bands(n, 0.1, NullModel::standard_normal());
  REQUIRE(static_cast<int>(t.rows.size()) == n);
  for (int i = 0; i < n; ++i) {
    const auto& r = t.rows[i];
    CHECK(r.b < r.B);
    CHECK(r.b > 0.0);
    CHECK(r.B < 1.0);
    CHECK(r.x_lower < r.x_upper);
    if (i > 0) {
      CHECK(r.b >= t.rows[i - 1].b);
      CHECK(r.B >= t.rows[i - 1].B);
    }
    // b_i = 1 - B_{n+1-i}
    CHECK(std::fabs(r.b - (1.0 - t.rows[n - 1 - i].B)) <= 1e-10);
  }
  CHECK(t.coverage_lower <= 1.0 - 0.1 + 1e-12);
  CHECK(t.coverage_upper >= 1.0 - 0.1 - 1e-3);
  CHECK(t.coverage_lower <= t.coverage_upper);
}

TEST_CASE("confidence_bands: violation iff M_n below the threshold") {
  const int n = 25;
  auto t = confidence_bands(n, 0.2, NullModel::uniform());
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int violations = 0;
  for (int rep = 0; rep < 4000; ++rep) {
    std::vector<double> u(n);
    for (auto& v : u) v = U(g);
    std::sort(u.begin(), u.end());
    SortedUniformSample s;
    s.values = u;
    const auto mn = mn_statistics(order_pvalues(s));
    bool inside = true;
    for (int i = 0; i < n; ++i)
      if (!(t.rows[i].b < u[i] && u[i] < t.rows[i].B)) {
        inside = false;
        break;
      }
    violations += !inside;
    CHECK(inside == (mn.mn > t.c_alpha));
  }
  CHECK(violations > 0);  // alpha = 0.2 must actually trigger
}

TEST_CASE("confidence_bands: bands shrink as n grows") {
  auto width = [](const BandTable& t) {
    double w = 0.0;
    for (const auto& r : t.rows) w = std::max(w, r.B - r.b);
    return w;
  };
  const auto t100 = confidence_bands(100, 0.05, NullModel::uniform());
  const auto t1000 = confidence_bands(1000, 0.05, NullModel::uniform());
  CHECK(width(t1000) < width(t100));
}

TEST_CASE("confidence_bands: coverage close to 1 - alpha") {
  const int n = 40, reps = 5000;
  const double alpha = 0.1;
  auto t = confidence_bands(n, alpha, NullModel::uniform());
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int inside_count = 0;
  std::vector<double> u(n);
  for (int rep = 0; rep < reps; ++rep) {
    for (auto& v : u) v = U(g);
    std::sort(u.begin(), u.end());
    bool inside = true;
    for (int i = 0; i < n; ++i)
      if (!(t.rows[i].b < u[i] && u[i] < t.rows[i].B)) {
        inside = false;
        break;
      }
    inside_count += inside;
  }
  const double cov = static_cast<double>(inside_count) / reps;
  const double se = std::sqrt(alpha * (1.0 - alpha) / reps);
  CHECK(std::fabs(cov - (1.0 - alpha)) <= 4.0 * se + 5e-3);
}

TEST_CASE("confidence_bands: domain errors") {
  CHECK_THROWS_AS(confidence_bands(0, 0.1, NullModel::uniform()),
                  std::invalid_argument);
  CHECK_THROWS_AS(confidence_bands(10, 0.0, NullModel::uniform()),
                  std::domain_error);
  CHECK_THROWS_AS(confidence_bands(10, 1.0, NullModel::uniform()),
                  std::domain_error);
}
