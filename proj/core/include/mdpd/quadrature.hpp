#pragma once

#include <functional>

namespace mdpd {

/// Settings for adaptive integration over [0, inf).
///
/// The half-line is mapped onto (0, 1) by x = scale * t / (1 - t); choosing
/// scale near the bulk of the integrand (e.g. a model median) keeps the
/// mapped integrand well centred. Integration stops once the error estimate
/// drops below max(abs_tolerance, rel_tolerance * |value|), or below the
/// rounding floor set by the integral of |f|; a result whose final estimate
/// exceeds ten times that bound is rejected.
struct QuadratureSpec {
  double abs_tolerance = 1e-10;
  double rel_tolerance = 1e-8;
  int max_subdivisions = 200;
  double scale = 1.0;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on [lo, hi].
QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                                    const QuadratureSpec& spec = {});

/// Integral of f over [0, inf). Throws QuadratureError (carrying the best
/// estimate) when the requested accuracy is not reached.
QuadratureResult integrate_halfline(const std::function<double(double)>& f, const QuadratureSpec& spec = {});

}  // namespace mdpd
