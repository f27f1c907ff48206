#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mdpd/error.hpp"
#include "mdpd/tuning.hpp"
#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace mdpd;

namespace {

Sample contaminate(const ParamVector& p, std::size_t n, double eps, std::uint64_t seed) {
  ContaminationScheme scheme;
  scheme.epsilon = eps;
  scheme.contaminant = 20.0 * quantile(p, 0.99);
  scheme.seed = seed;
  return simulate_contaminated(p, scheme, n);
}

std::size_t grid_argmin(const TuningResult& t) {
  return static_cast<std::size_t>(std::min_element(t.cvmd_curve.begin(), t.cvmd_curve.end()) - t.cvmd_curve.begin());
}

}  // namespace

TEST_CASE("cvm distance on three points by hand") {
  const Sample s({3.0, 1.0, 2.0});
  const double f1 = -std::expm1(-1.0 / 2.5);
  const double f2 = -std::expm1(-2.0 / 2.0);
  const double f3 = -std::expm1(-3.0 / 1.5);
  const double expected = ((0.5 / 3 - f1) * (0.5 / 3 - f1) + (1.5 / 3 - f2) * (1.5 / 3 - f2) + (2.5 / 3 - f3) * (2.5 / 3 - f3)) / 3;
  CHECK_THAT(cvm_distance(Family::Exponential, 0.0, s), WithinAbs(expected, 1e-12));
}

TEST_CASE("cvm distance of a sample at model quantiles is tiny") {
  const auto p = ParamVector::exponential(1.0);
  std::vector<double> v;
  for (int i = 1; i <= 200; ++i) v.push_back(quantile(p, (i - 0.5) / 200));
  const Sample s(v);
  for (double alpha : {0.0, 0.5}) CHECK(cvm_distance(Family::Exponential, alpha, s) <= 1e-3);
}

TEST_CASE("cvm distance ignores input order and stays in [0, 1]") {
  for (Family f : kAllFamilies) {
    const ParamVector p = f == Family::Exponential ? ParamVector::exponential(0.1)
                          : f == Family::Gamma     ? ParamVector::gamma(3, 0.5)
                          : f == Family::Lognormal ? ParamVector::lognormal(1, 0.6)
                                                   : ParamVector::weibull(1.5, 0.2);
    const Sample s = testing::draw(p, 40, 17);
    std::vector<double> rev(s.values().rbegin(), s.values().rend());
    const double a = cvm_distance(f, 0.3, s);
    CHECK(cvm_distance(f, 0.3, Sample(rev)) == a);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("tuning needs p + 2 observations") {
  CHECK_THROWS_AS(cvm_distance(Family::Gamma, 0.1, Sample({1.0, 2.0, 3.0})), InsufficientDataError);
  CHECK_THROWS_AS(select_alpha(Family::Exponential, Sample({1.0, 2.0})), InsufficientDataError);
}

TEST_CASE("clean exponential data needs little robustness") {
  const Sample s = testing::draw(ParamVector::exponential(1.0), 500, 2024);
  const auto t = select_alpha(Family::Exponential, s);
  CHECK(t.alpha_star <= 0.3);
  CHECK(t.cvmd_star <= t.cvmd_curve.back());
  CHECK(t.alpha_grid.size() == 21);
  CHECK_THAT(t.alpha_grid[20], WithinAbs(1.0, 0.0));
}

TEST_CASE("far outliers make the alpha = 0 distance much larger than alpha = 0.1") {
  const auto p = ParamVector::exponential(1.0);
  TuningOptions fast;
  fast.fast = true;
  const auto dirty = select_alpha(Family::Exponential, contaminate(p, 300, 0.1, 5), fast);
  CHECK(dirty.cvmd_curve[0] > 10.0 * dirty.cvmd_curve[2]);
  CHECK(dirty.alpha_star > 0.0);
}

TEST_CASE("gamma grid minimum moves right under far outliers") {
  const auto p = ParamVector::gamma(5, 0.05);
  TuningOptions fast;
  fast.fast = true;
  const auto clean = select_alpha(Family::Gamma, contaminate(p, 200, 0.0, 31), fast);
  const auto dirty = select_alpha(Family::Gamma, contaminate(p, 200, 0.05, 31), fast);
  CHECK(clean.refinements.empty());
  CHECK(grid_argmin(dirty) > grid_argmin(clean));
}

TEST_CASE("tuning result invariants") {
  const Sample s = contaminate(ParamVector::weibull(2, 0.01), 60, 0.05, 8);
  const auto t = select_alpha(Family::Weibull, s);
  CHECK(t.alpha_star >= 0.0);
  CHECK(t.alpha_star <= 1.0);
  double best = *std::min_element(t.cvmd_curve.begin(), t.cvmd_curve.end());
  for (const auto& [a, v] : t.refinements) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    best = std::min(best, v);
  }
  CHECK(t.cvmd_star == best);
  for (double v : t.cvmd_curve) CHECK(t.cvmd_star <= v + 1e-9);
  CHECK(t.fit_star.alpha == t.alpha_star);
  CHECK(t.fit_star.converged);

  std::ostringstream csv;
  write_cvmd_csv(csv, t);
  CHECK(csv.str().rfind("alpha,cvmd\n0,", 0) == 0);
}

TEST_CASE("tuning is deterministic and independent of thread count") {
  const Sample s = contaminate(ParamVector::lognormal(5, 0.4), 50, 0.05, 12);
  TuningOptions one, three;
  one.threads = 1;
  three.threads = 3;
  const auto a = select_alpha(Family::Lognormal, s, one);
  const auto b = select_alpha(Family::Lognormal, s, three);
  const auto c = select_alpha(Family::Lognormal, s, one);
  CHECK(a.cvmd_curve == b.cvmd_curve);
  CHECK(a.refinements == b.refinements);
  CHECK(a.alpha_star == b.alpha_star);
  CHECK(a.cvmd_curve == c.cvmd_curve);
  CHECK(a.fit_star.theta_hat == c.fit_star.theta_hat);
}
