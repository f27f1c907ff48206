#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mdpd/family.hpp"
#include "mdpd/sample.hpp"
#include "mdpd/uncertainty.hpp"

namespace mdpd::testing {

inline Sample draw(const ParamVector& p, std::size_t n, std::uint64_t seed) { return sample_family(p, n, seed); }

/// Central finite difference of log f in parameter i.
inline double fd_log_density(const ParamVector& p, std::size_t i, double x, double h = 1e-6) {
  std::vector<double> up = p.to_vector(), dn = p.to_vector();
  const double step = h * std::max(1.0, std::abs(up[i]));
  up[i] += step;
  dn[i] -= step;
  return (log_density(ParamVector(p.family(), up), x) - log_density(ParamVector(p.family(), dn), x)) / (2 * step);
}

/// Textbook log-densities, written independently of the library kernels.
inline double reference_log_density(const ParamVector& p, double x) {
  switch (p.family()) {
    case Family::Exponential: return std::log(p[0]) - p[0] * x;
    case Family::Gamma: return p[0] * std::log(p[1]) + (p[0] - 1) * std::log(x) - p[1] * x - std::lgamma(p[0]);
    case Family::Lognormal: {
      const double z = (std::log(x) - p[0]) / p[1];
      return -0.5 * z * z - std::log(x * p[1] * std::sqrt(2 * std::numbers::pi));
    }
    case Family::Weibull: return std::log(p[0] * p[1]) + (p[0] - 1) * std::log(p[1] * x) - std::pow(p[1] * x, p[0]);
  }
  return 0.0;
}

}  // namespace mdpd::testing
