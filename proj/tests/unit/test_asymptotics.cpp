#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "mdpd/asymptotics.hpp"
#include "mdpd/error.hpp"
#include "mdpd/quadrature.hpp"
#include "mdpd/random.hpp"
#include "test_util.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace mdpd;

namespace {

double are_formula(double a) {
  const double num = std::pow(1 + a * a, 2) / std::pow(1 + a, 6);
  const double den = (1 + 4 * a * a) / std::pow(1 + 2 * a, 3) - a * a / std::pow(1 + a, 4);
  return num / den;
}

}  // namespace

TEST_CASE("small matrix algebra") {
  const SmallMatrix m(2, {4, 1, 1, 3});
  CHECK(m.trace() == 7);
  CHECK(m.determinant() == 11);
  const SmallMatrix id = m * m.inverse();
  CHECK_THAT(id(0, 0), WithinAbs(1, 1e-15));
  CHECK_THAT(id(0, 1), WithinAbs(0, 1e-15));
  CHECK_THAT(id(1, 1), WithinAbs(1, 1e-15));
  CHECK_THROWS_AS(SmallMatrix(2, {1, 2, 2, 4}).inverse(), SingularInformationError);
  bool ill = false;
  SmallMatrix(2, {1, 0, 0, 1e-12}).inverse(&ill);
  CHECK(ill);
  const std::vector<double> v{1, 2};
  CHECK(m * std::span<const double>(v) == std::vector<double>{6, 7});
}

TEST_CASE("exponential sandwich closed forms agree with quadrature") {
  CounterRng rng(99);
  for (int i = 0; i < 10; ++i) {
    const double lambda = std::exp(-3 + 6 * rng.uniform01());
    const double alpha = rng.uniform01();
    const auto p = ParamVector::exponential(lambda);
    const auto closed = sandwich(p, alpha, SandwichMethod::Auto);
    const auto numeric = sandwich(p, alpha, SandwichMethod::Quadrature);
    CHECK_THAT(closed.J(0, 0), WithinRel(numeric.J(0, 0), 1e-7));
    CHECK_THAT(closed.K(0, 0), WithinRel(numeric.K(0, 0), 1e-7));
    CHECK_THAT(closed.xi[0], WithinRel(numeric.xi[0], 1e-7));
    CHECK_THAT(closed.avar(0, 0), WithinRel(numeric.avar(0, 0), 1e-7));
  }
}

TEST_CASE("at alpha = 0 the sandwich collapses to the inverse Fisher information") {
  CHECK_THAT(sandwich(ParamVector::exponential(3.0), 0.0).avar(0, 0), WithinRel(9.0, 1e-14));
  for (const auto& p : {ParamVector::gamma(4, 2), ParamVector::lognormal(1, 0.5), ParamVector::weibull(2.5, 0.1)}) {
    const auto s = sandwich(p, 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK_THAT(s.xi[i], WithinAbs(0.0, 1e-9));
      for (std::size_t j = 0; j < 2; ++j) CHECK_THAT(s.K(i, j), WithinRel(s.J(i, j), 1e-8));
    }
    CHECK_THAT((s.J.inverse() * s.K).trace(), WithinAbs(2.0, 1e-8));
  }
  // lognormal Fisher information is diag(1/sigma^2, 2/sigma^2)
  const auto s = sandwich(ParamVector::lognormal(1, 0.5), 0.0);
  CHECK_THAT(s.J(0, 0), WithinRel(4.0, 1e-9));
  CHECK_THAT(s.J(1, 1), WithinRel(8.0, 1e-9));
  CHECK_THAT(s.J(0, 1), WithinAbs(0.0, 1e-9));
}

TEST_CASE("information matrices are symmetric and positive definite") {
  for (const auto& p : {ParamVector::gamma(0.8, 1), ParamVector::lognormal(-1, 1.2), ParamVector::weibull(0.9, 3)})
    for (double alpha : {0.25, 1.0}) {
      const auto s = sandwich(p, alpha);
      CHECK_THAT(s.J(0, 1), WithinRel(s.J(1, 0), 1e-12));
      CHECK(s.J(0, 0) > 0);
      CHECK(s.J.determinant() > 0);
      CHECK(s.avar(0, 0) > 0);
      CHECK(s.avar.determinant() > 0);
    }
}

TEST_CASE("exponential ARE closed form and tabulated values") {
  const std::vector<double> tabulated{0.97, 0.90, 0.82, 0.75, 0.68, 0.59, 0.51};
  const auto alphas = are_table_alphas();
  REQUIRE(alphas.size() == tabulated.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    CHECK_THAT(exponential_are(alphas[i]), WithinRel(are_formula(alphas[i]), 1e-14));
    CHECK_THAT(exponential_are(alphas[i]), WithinAbs(tabulated[i], 0.005));
  }
  CHECK_THAT(exponential_are(0.0), WithinRel(1.0, 1e-15));
  // the variance ratio from the sandwich gives the same number
  for (double a : {0.05, 0.45, 0.9}) {
    const auto p = ParamVector::exponential(2.0);
    CHECK_THAT(sandwich(p, 0.0).avar(0, 0) / sandwich(p, a, SandwichMethod::Quadrature).avar(0, 0), WithinRel(exponential_are(a), 1e-7));
  }
}

TEST_CASE("two-parameter ARE matches an independent high-precision computation") {
  struct Row {
    ParamVector p;
    std::vector<double> first, second;  // alpha = 0.1 .. 1.0 as tabulated
  };
  const std::vector<Row> rows{
      {ParamVector::gamma(5, 0.05), {.9788, .9313, .8737, .8153, .7609, .6698, .5747}, {.975, .9194, .8536, .7885, .7294, .6345, .5418}},
      {ParamVector::gamma(10, 0.05), {.9772, .926, .8643, .8024, .7452, .6513, .5565}, {.9754, .9203, .8547, .7896, .7304, .6348, .5416}},
      {ParamVector::weibull(2, 0.01), {.9807, .9386, .8884, .8373, .7891, .7064, .6162}, {.9924, .9718, .9414, .9049, .8654, .7862, .684}},
      {ParamVector::weibull(4, 0.01), {.9802, .9352, .8803, .8242, .7714, .6826, .5902}, {.9901, .9657, .9327, .8951, .8553, .7758, .6676}},
      {ParamVector::lognormal(5, 0.2), {.9875, .9582, .9203, .8788, .8366, .756, .652}, {.9748, .9186, .8521, .7865, .7269, .6315, .5389}},
      {ParamVector::lognormal(5, 0.4), {.9873, .9569, .9176, .8748, .8321, .7535, .658}, {.9724, .9124, .843, .7759, .7162, .6223, .5324}},
  };
  const auto alphas = are_table_alphas();
  for (const auto& r : rows) {
    const AreTable t = are(r.p, alphas);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      CHECK_THAT(t.rows[i].are[0], WithinAbs(r.first[i], 6e-5));
      CHECK_THAT(t.rows[i].are[1], WithinAbs(r.second[i], 6e-5));
    }
  }
}

TEST_CASE("ARE invariances and bounds") {
  const std::vector<double> alphas{0.0, 0.3, 0.8};
  const auto a = are(ParamVector::lognormal(5, 0.3), alphas);
  const auto b = are(ParamVector::lognormal(-2, 0.3), alphas);
  const auto g1 = are(ParamVector::gamma(3, 0.05), alphas);
  const auto g2 = are(ParamVector::gamma(3, 20.0), alphas);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK_THAT(a.rows[i].are[c], WithinRel(b.rows[i].are[c], 1e-7));
      CHECK_THAT(g1.rows[i].are[c], WithinRel(g2.rows[i].are[c], 1e-7));
      CHECK(a.rows[i].are[c] <= 1.0 + 1e-12);
      CHECK(g1.rows[i].are[c] <= 1.0 + 1e-12);
    }
  CHECK(a.rows[0].are == std::vector<double>{1.0, 1.0});
  std::ostringstream csv;
  write_are_csv(csv, are(ParamVector::exponential(1.0), are_table_alphas()));
  CHECK(csv.str().rfind("alpha,param,are\n0.1,lambda,0.9677", 0) == 0);
}

TEST_CASE("asymptotic standard error of the exponential MLE") {
  FitResult f;
  f.family = Family::Exponential;
  f.theta_hat = ParamVector::exponential(2.0);
  f.converged = true;
  f.n_obs = 400;
  CHECK_THAT(asymptotic_se(f)[0], WithinRel(0.1, 1e-14));
  f.converged = false;
  CHECK_THROWS(asymptotic_se(f));
}

TEST_CASE("influence function") {
  CHECK(influence_function(ParamVector::exponential(1.0), 0.0, 5.0)[0] == -4.0);
  // IF(y) = J^-1 (u f^alpha - xi) has mean zero under the model
  for (const auto& p : {ParamVector::exponential(0.5), ParamVector::gamma(5, 1), ParamVector::lognormal(0, 1), ParamVector::weibull(5, 1)})
    for (double alpha : {0.0, 0.5}) {
      const InfluenceCurve ic(p, alpha);
      for (std::size_t c = 0; c < p.size(); ++c) {
        QuadratureSpec q;
        q.scale = quantile(p, 0.5);
        q.abs_tolerance = 1e-10;
        const double m = integrate_halfline([&](double y) { return ic(y)[c] * density(p, y); }, q).value;
        CHECK_THAT(m, WithinAbs(0.0, 1e-7));
      }
    }
}

TEST_CASE("influence is bounded exactly when alpha > 0") {
  for (const auto& p : {ParamVector::exponential(1), ParamVector::gamma(5, 1), ParamVector::weibull(5, 1)}) {
    const InfluenceCurve mle(p, 0.0);
    const auto grid = influence_grid(p, 400);
    CHECK(mle.norm(grid.back()) > 1e3 * mle.norm(quantile(p, 0.99)));
    for (double alpha : {0.1, 0.5, 1.0}) {
      const double s1 = if_supremum(p, alpha, 2000);
      const double s2 = if_supremum(p, alpha, 4000);
      CHECK(std::isfinite(s1));
      CHECK(std::abs(s2 - s1) < 1e-3 * s1);
      const InfluenceCurve ic(p, alpha);
      CHECK(ic.norm(grid.back()) < ic.norm(quantile(p, 0.99)) + s1);
    }
  }
}

TEST_CASE("component influence holds the nuisance fixed") {
  const auto p = ParamVector::gamma(5, 1);
  const InfluenceCurve ic(p, 0.0);
  const auto s = sandwich(p, 0.0);
  const double y = 8.0;
  CHECK_THAT(ic.component(0, y), WithinRel(score(p, y)[0] / s.J(0, 0), 1e-10));
  CHECK_THROWS(ic.component(2, y));
}

TEST_CASE("influence grid spans tail quantiles") {
  const auto p = ParamVector::lognormal(0, 1);
  const auto g = influence_grid(p, 10);
  CHECK_THAT(g.front(), WithinRel(quantile(p, 1e-6), 1e-12));
  CHECK_THAT(g.back(), WithinRel(quantile(p, 1 - 1e-6) * 1e6, 1e-12));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}
