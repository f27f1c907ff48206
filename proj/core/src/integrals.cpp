#include "mdpd/integrals.hpp"

#include <cmath>

namespace mdpd {
namespace {

// weight(x) = f^power(x), with zero returned before touching the score so
// that overflowing scores far in the tail never meet an underflowed weight.
template <class Fn>
double integrate_weighted(const ParamVector& p, double power, const QuadratureSpec& spec, Fn&& fn) {
  const detail::Kernel kernel(p);
  const auto integrand = [&](double x) {
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
    const double lx = std::log(x);
    const double w = std::exp(power * kernel.log_density(x, lx));
    if (w == 0.0) return 0.0;
    double u[kMaxParams];
    kernel.score(x, lx, u);
    return w * fn(u);
  };
  return integrate_halfline(integrand, spec).value;
}

}  // namespace

QuadratureSpec model_quadrature_spec(const ParamVector& p) {
  QuadratureSpec spec;
  spec.scale = quantile(p, 0.5);
  spec.abs_tolerance = 1e-13;
  spec.rel_tolerance = 1e-10;
  spec.max_subdivisions = 400;
  return spec;
}

std::vector<double> xi_by_quadrature(const ParamVector& p, double alpha, const QuadratureSpec& spec) {
  check_dpd_validity(p, alpha);
  std::vector<double> xi(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    xi[i] = integrate_weighted(p, 1.0 + alpha, spec, [i](const double* u) { return u[i]; });
  return xi;
}

std::array<double, 4> score_outer_by_quadrature(const ParamVector& p, double power, const QuadratureSpec& spec) {
  const std::size_t k = p.size();
  std::array<double, 4> m{};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double v = integrate_weighted(p, power, spec, [i, j](const double* u) { return u[i] * u[j]; });
      m[i * k + j] = v;
      m[j * k + i] = v;
    }
  }
  return m;
}

}  // namespace mdpd
