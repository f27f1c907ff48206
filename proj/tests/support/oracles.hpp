#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/family.hpp"
#include "mdpd/sample.hpp"

namespace mdpd::testing {

inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double psi_fd(double a) {
  const double h = 1e-4 * a;
  return (std::lgamma(a + h) - std::lgamma(a - h)) / (2 * h);
}

/// Maximum-likelihood estimates from closed forms or one-dimensional score
/// equations solved by bisection.
inline std::vector<double> mle_oracle(Family f, const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double mlog = 0.0;
  for (double v : x) mlog += std::log(v);
  mlog /= n;
  switch (f) {
    case Family::Exponential: return {1.0 / mean};
    case Family::Lognormal: {
      double ss = 0.0;
      for (double v : x) ss += (std::log(v) - mlog) * (std::log(v) - mlog);
      return {mlog, std::sqrt(ss / n)};
    }
    case Family::Gamma: {
      const double s = std::log(mean) - mlog;
      const double a = bisect([&](double a) { return std::log(a) - psi_fd(a) - s; }, 1e-3, 1e4);
      return {a, a / mean};
    }
    case Family::Weibull: {
      const auto g = [&](double a) {
        double sxa = 0.0, sxal = 0.0;
        for (double v : x) {
          const double xa = std::pow(v, a);
          sxa += xa;
          sxal += xa * std::log(v);
        }
        return 1.0 / a + mlog - sxal / sxa;
      };
      const double a = bisect(g, 0.05, 50.0);
      double sxa = 0.0;
      for (double v : x) sxa += std::pow(v, a);
      return {a, std::pow(n / sxa, 1.0 / a)};
    }
  }
  return {};
}

/// Working coordinates of the grid oracle: logs of positive parameters, mu raw.
inline std::vector<double> to_grid_coords(const ParamVector& p) {
  std::vector<double> z = p.to_vector();
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(p.family() == Family::Lognormal && i == 0)) z[i] = std::log(z[i]);
  return z;
}

inline ParamVector from_grid_coords(Family f, std::vector<double> z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(f == Family::Lognormal && i == 0)) z[i] = std::exp(z[i]);
  return ParamVector(f, z);
}

/// Exhaustive search of H over nested grids (steps 0.05, 0.005, 0.0005)
/// centred on `centre`, returning grid coordinates of the best point.
inline std::vector<double> grid_oracle(Family f, double alpha, const Sample& s, const std::vector<double>& centre,
                                       double half_width = 3.0) {
  const std::size_t p = param_count(f);
  std::vector<double> best = centre;
  double best_h = INFINITY;
  struct Level {
    double half, step;
  };
  const Level levels[] = {{half_width, 0.05}, {0.1, 0.005}, {0.01, 0.0005}};
  for (const auto& lv : levels) {
    const std::vector<double> c = best;
    const int k = static_cast<int>(std::lround(lv.half / lv.step));
    const auto eval = [&](const std::vector<double>& z) {
      try {
        const ParamVector th = from_grid_coords(f, z);
        if (!th.dpd_valid(alpha)) return;
        const double h = objective_h(th, alpha, s);
        if (h < best_h) {
          best_h = h;
          best = z;
        }
      } catch (...) {
      }
    };
    if (p == 1) {
      for (int i = -k; i <= k; ++i) eval({c[0] + i * lv.step});
    } else {
      for (int i = -k; i <= k; ++i)
        for (int j = -k; j <= k; ++j) eval({c[0] + i * lv.step, c[1] + j * lv.step});
    }
  }
  return best;
}

}  // namespace mdpd::testing
