#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mdpd/error.hpp"
#include "mdpd/quadrature.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace mdpd;

TEST_CASE("finite interval polynomials and smooth functions") {
  CHECK_THAT(integrate_interval([](double x) { return x * x * x; }, 0.0, 2.0).value, WithinRel(4.0, 1e-14));
  CHECK_THAT(integrate_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, WithinRel(2.0, 1e-12));
  CHECK_THAT(integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-10, 1e-10, 400, 1.0}).value,
             WithinRel(2.0, 1e-8));
}

TEST_CASE("half-line integrals") {
  CHECK_THAT(integrate_halfline([](double x) { return std::exp(-x); }).value, WithinRel(1.0, 1e-10));
  CHECK_THAT(integrate_halfline([](double x) { return x * x * std::exp(-x); }).value, WithinRel(2.0, 1e-10));
  CHECK_THAT(integrate_halfline([](double x) { return 1.0 / (1.0 + x * x); }).value, WithinRel(std::numbers::pi / 2, 1e-9));
  QuadratureSpec wide;
  wide.scale = 1e4;
  CHECK_THAT(integrate_halfline([](double x) { return std::exp(-x / 1e4) / 1e4; }, wide).value, WithinRel(1.0, 1e-10));
}

TEST_CASE("scale changes nothing but the mapping") {
  const auto f = [](double x) { return std::pow(x, 4.0) * std::exp(-2.0 * x); };  // 4!/2^5
  for (double s : {0.1, 1.0, 10.0}) {
    QuadratureSpec q;
    q.scale = s;
    CHECK_THAT(integrate_halfline(f, q).value, WithinRel(0.75, 1e-9));
  }
}

TEST_CASE("failures are reported") {
  QuadratureSpec tight;
  tight.max_subdivisions = 17;
  tight.abs_tolerance = 1e-15;
  tight.rel_tolerance = 1e-15;
  CHECK_THROWS_AS(integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, tight), QuadratureError);
  CHECK_THROWS_AS(integrate_interval([](double) { return NAN; }, 0.0, 1.0), QuadratureError);
  QuadratureSpec bad;
  bad.scale = -1.0;
  CHECK_THROWS(bad.validate());
}
