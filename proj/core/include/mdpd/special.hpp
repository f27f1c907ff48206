#pragma once

// Special functions needed by the four rainfall families. All are pure and
// thread-safe (no reliance on the global signgam that std::lgamma writes).

namespace mdpd {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7).
double log_gamma(double x);

/// psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_incomplete_gamma_lower(double a, double x);

/// Standard normal distribution function.
double std_normal_cdf(double z);

/// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

}  // namespace mdpd
