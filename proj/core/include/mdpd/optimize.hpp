#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mdpd {

/// Nelder-Mead settings. A run is converged when the simplex diameter is
/// below param_tolerance * (1 + |best|) and the spread of objective values
/// is below objective_tolerance * (1 + |best value|), both before
/// max_evaluations is used up.
struct OptimizerSpec {
  double param_tolerance = 1e-8;
  double objective_tolerance = 1e-10;
  int max_evaluations = 10000;
  int restart_count = 2;
  double initial_step = 0.1;
  std::uint64_t seed = 0x6d647064ull;  // restart perturbations

  void validate() const;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derive-free simplex minimisation. Non-finite objective values during the
/// search are treated as +inf; a non-finite value at the start is an error.
MinimizeResult minimize(const Objective& objective, std::span<const double> start, const OptimizerSpec& spec = {});

/// Brent's method on [lo, hi]; requires f(lo) * f(hi) <= 0.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi);

/// Smallest x > 0 with cdf(x) = p, by geometric bracketing and bisection.
double invert_cdf(const std::function<double(double)>& cdf, double p);

}  // namespace mdpd
