#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdpd/family.hpp"
#include "mdpd/optimize.hpp"
#include "mdpd/quadrature.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

/// Largest tuning parameter accepted anywhere in the library.
inline constexpr double kMaxAlpha = 1.0;

struct FitOptions {
  OptimizerSpec optimizer{};
  /// Newton iterations on the analytic gradient after (or instead of, when
  /// warm-started) the simplex search.
  bool newton_polish = true;
  /// Exponential only: count sign changes of U_n on a wide grid and warn
  /// when the estimating equation has several roots.
  bool scan_roots = true;
};

struct FitResult {
  Family family = Family::Exponential;
  double alpha = 0.0;
  ParamVector theta_hat = ParamVector::exponential(1.0);
  double objective = 0.0;  // H_{alpha,n}(theta_hat)
  bool converged = false;
  std::size_t n_obs = 0;
  std::size_t evaluations = 0;
  std::vector<std::string> warnings;
};

/// H_{alpha,n}(theta): mean of v_alpha over the sample.
double objective_h(const ParamVector& theta, double alpha, const Sample& sample);

/// Analytic gradient of objective_h with respect to theta.
std::vector<double> objective_gradient(const ParamVector& theta, double alpha, const Sample& sample);

/// U_n(theta) = mean(u f^alpha) - integral(u f^(1+alpha)). The integral is
/// closed form for the exponential and by quadrature otherwise.
std::vector<double> estimating_residual(const ParamVector& theta, double alpha, const Sample& sample);

/// f_theta^alpha(X_i) for every observation.
std::vector<double> dpd_weights(const ParamVector& theta, double alpha, const Sample& sample);

/// Moment-type starting point (exponential 1/mean, gamma moments, lognormal
/// log-moments, Weibull probability-plot regression).
ParamVector initial_estimate(Family family, const Sample& sample);

/// Minimum-DPD estimate at tuning parameter alpha in [0, 1].
FitResult fit(Family family, double alpha, const Sample& sample, const std::optional<ParamVector>& warm_start = std::nullopt,
              const FitOptions& options = {});

}  // namespace mdpd
