#include "mdpd/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mdpd/error.hpp"
#include "mdpd/optimize.hpp"
#include "mdpd/special.hpp"

namespace mdpd {
namespace {

constexpr std::array<std::string_view, 1> kExpNames = {"lambda"};
constexpr std::array<std::string_view, 2> kShapeRateNames = {"a", "b"};
constexpr std::array<std::string_view, 2> kLogNames = {"mu", "sigma"};

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_positive_x(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + ": x must be positive and finite");
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Exponential: return "exponential";
    case Family::Gamma: return "gamma";
    case Family::Lognormal: return "lognormal";
    case Family::Weibull: return "weibull";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : kAllFamilies)
    if (family_name(f) == name) return f;
  if (name == "exp") return Family::Exponential;
  if (name == "lnorm") return Family::Lognormal;
  return std::nullopt;
}

std::span<const std::string_view> param_names(Family f) {
  switch (f) {
    case Family::Exponential: return kExpNames;
    case Family::Lognormal: return kLogNames;
    default: return kShapeRateNames;
  }
}

ParamVector::ParamVector(Family family, std::span<const double> values) : family_(family) {
  if (values.size() != param_count(family))
    throw DomainError(std::string(family_name(family)) + " takes " + std::to_string(param_count(family)) +
                      " parameter(s), got " + std::to_string(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw DomainError("parameters must be finite");
    const bool unrestricted = family == Family::Lognormal && i == 0;
    if (!unrestricted && !(values[i] > 0.0))
      throw DomainError(std::string(family_name(family)) + " parameter '" + std::string(param_names(family)[i]) +
                        "' must be positive");
    values_[i] = values[i];
  }
}

ParamVector ParamVector::exponential(double lambda) {
  const double v[] = {lambda};
  return ParamVector(Family::Exponential, v);
}
ParamVector ParamVector::gamma(double shape, double rate) {
  const double v[] = {shape, rate};
  return ParamVector(Family::Gamma, v);
}
ParamVector ParamVector::lognormal(double mu, double sigma) {
  const double v[] = {mu, sigma};
  return ParamVector(Family::Lognormal, v);
}
ParamVector ParamVector::weibull(double shape, double rate) {
  const double v[] = {shape, rate};
  return ParamVector(Family::Weibull, v);
}

bool ParamVector::dpd_valid(double alpha) const noexcept {
  if (!(alpha >= 0.0)) return false;
  if (family_ == Family::Gamma || family_ == Family::Weibull) return values_[0] > alpha / (1.0 + alpha);
  return true;
}

void check_dpd_validity(const ParamVector& p, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a finite non-negative number");
  if (!p.dpd_valid(alpha))
    throw DpdValidityError(std::string(family_name(p.family())) + ": shape " + std::to_string(p[0]) +
                           " must exceed alpha/(1+alpha) = " + std::to_string(alpha / (1.0 + alpha)));
}

namespace detail {

Kernel::Kernel(const ParamVector& p) : family_(p.family()), p0_(p[0]), p1_(p.size() > 1 ? p[1] : 0.0) {
  switch (family_) {
    case Family::Exponential:
      log_norm_ = std::log(p0_);
      break;
    case Family::Gamma:
      log_norm_ = p0_ * std::log(p1_) - log_gamma(p0_);
      aux_ = std::log(p1_) - digamma(p0_);
      break;
    case Family::Lognormal:
      log_norm_ = -kLogSqrt2Pi - std::log(p1_);
      break;
    case Family::Weibull:
      log_norm_ = std::log(p0_ * p1_);
      aux_ = std::log(p1_);
      break;
  }
}

double Kernel::log_density(double x, double log_x) const {
  switch (family_) {
    case Family::Exponential:
      return log_norm_ - p0_ * x;
    case Family::Gamma:
      return log_norm_ + (p0_ - 1.0) * log_x - p1_ * x;
    case Family::Lognormal: {
      const double z = (log_x - p0_) / p1_;
      return log_norm_ - log_x - 0.5 * z * z;
    }
    case Family::Weibull: {
      const double l = aux_ + log_x;  // log(bx)
      return log_norm_ + (p0_ - 1.0) * l - std::exp(p0_ * l);
    }
  }
  return 0.0;
}

void Kernel::score(double x, double log_x, double* out) const {
  switch (family_) {
    case Family::Exponential:
      out[0] = 1.0 / p0_ - x;
      return;
    case Family::Gamma:
      out[0] = aux_ + log_x;
      out[1] = p0_ / p1_ - x;
      return;
    case Family::Lognormal: {
      const double d = log_x - p0_;
      const double s2 = p1_ * p1_;
      out[0] = d / s2;
      out[1] = (d * d - s2) / (s2 * p1_);
      return;
    }
    case Family::Weibull: {
      const double l = aux_ + log_x;
      const double pw = std::exp(p0_ * l);  // (bx)^a
      out[0] = 1.0 / p0_ + l - pw * l;
      out[1] = (p0_ / p1_) * (1.0 - pw);
      return;
    }
  }
}

double gamma_quantile(double shape, double rate, double q) {
  // Wilson-Hilferty start, then safeguarded Newton on log x.
  const double z = std_normal_quantile(q);
  const double c = 1.0 / (9.0 * shape);
  double x = shape * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
  if (!(x > 0.0)) x = std::exp((std::log(q) + log_gamma(shape + 1.0)) / shape);
  const double lg = log_gamma(shape);
  double t = std::log(x);
  for (int iter = 0; iter < 60; ++iter) {
    const double xt = std::exp(t);
    const double g = reg_incomplete_gamma_lower(shape, xt) - q;
    const double dens_times_x = std::exp(shape * t - xt - lg);  // d P / d t
    if (!(dens_times_x > 0.0) || !std::isfinite(dens_times_x)) break;
    double step = g / dens_times_x;
    step = std::clamp(step, -1.0, 1.0);
    t -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) {
      return std::exp(t) / rate;
    }
  }
  const double xt = std::exp(t);
  if (std::isfinite(xt) && std::abs(reg_incomplete_gamma_lower(shape, xt) - q) <= 1e-13) return xt / rate;
  return invert_cdf([shape](double y) { return reg_incomplete_gamma_lower(shape, y); }, q) / rate;
}

}  // namespace detail

double log_density(const ParamVector& p, double x) {
  require_positive_x(x, "log_density");
  return detail::Kernel(p).log_density(x, std::log(x));
}

double density(const ParamVector& p, double x) { return std::exp(log_density(p, x)); }

double cdf(const ParamVector& p, double x) {
  require_positive_x(x, "cdf");
  switch (p.family()) {
    case Family::Exponential: return -std::expm1(-p[0] * x);
    case Family::Gamma: return reg_incomplete_gamma_lower(p[0], p[1] * x);
    case Family::Lognormal: return std_normal_cdf((std::log(x) - p[0]) / p[1]);
    case Family::Weibull: return -std::expm1(-std::pow(p[1] * x, p[0]));
  }
  return 0.0;
}

double quantile(const ParamVector& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: level must lie in (0, 1)");
  switch (p.family()) {
    case Family::Exponential: return -std::log1p(-q) / p[0];
    case Family::Gamma: return detail::gamma_quantile(p[0], p[1], q);
    case Family::Lognormal: return std::exp(p[0] + p[1] * std_normal_quantile(q));
    case Family::Weibull: return std::pow(-std::log1p(-q), 1.0 / p[0]) / p[1];
  }
  return 0.0;
}

double mean(const ParamVector& p) {
  switch (p.family()) {
    case Family::Exponential: return 1.0 / p[0];
    case Family::Gamma: return p[0] / p[1];
    case Family::Lognormal: return std::exp(p[0] + 0.5 * p[1] * p[1]);
    case Family::Weibull: return std::exp(log_gamma(1.0 + 1.0 / p[0])) / p[1];
  }
  return 0.0;
}

std::vector<double> score(const ParamVector& p, double x) {
  require_positive_x(x, "score");
  std::vector<double> out(p.size());
  detail::Kernel(p).score(x, std::log(x), out.data());
  return out;
}

double dpd_mass_integral(const ParamVector& p, double alpha) {
  check_dpd_validity(p, alpha);
  if (alpha == 0.0) return 1.0;
  const double l1a = std::log1p(alpha);
  switch (p.family()) {
    case Family::Exponential:
      return std::pow(p[0], alpha) / (1.0 + alpha);
    case Family::Gamma: {
      const double a = p[0], b = p[1];
      const double c = (a - 1.0) * (1.0 + alpha) + 1.0;
      return std::exp(log_gamma(c) + alpha * std::log(b) - (1.0 + alpha) * log_gamma(a) - c * l1a);
    }
    case Family::Lognormal: {
      const double mu = p[0], s = p[1];
      return std::exp(-0.5 * l1a - alpha * (kLogSqrt2Pi + std::log(s)) - alpha * mu +
                      alpha * alpha * s * s / (2.0 * (alpha + 1.0)));
    }
    case Family::Weibull: {
      const double a = p[0], b = p[1];
      const double c = 1.0 + (a - 1.0) * alpha / a;
      return std::exp(alpha * std::log(a * b) + log_gamma(c) - c * l1a);
    }
  }
  return 0.0;
}

std::vector<double> dpd_mass_gradient(const ParamVector& p, double alpha) {
  const double m = dpd_mass_integral(p, alpha);
  std::vector<double> g(p.size(), 0.0);
  if (alpha == 0.0) return g;
  const double l1a = std::log1p(alpha);
  switch (p.family()) {
    case Family::Exponential:
      g[0] = alpha / p[0];
      break;
    case Family::Gamma: {
      const double a = p[0];
      const double c = (a - 1.0) * (1.0 + alpha) + 1.0;
      g[0] = (1.0 + alpha) * (digamma(c) - digamma(a) - l1a);
      g[1] = alpha / p[1];
      break;
    }
    case Family::Lognormal:
      g[0] = -alpha;
      g[1] = -alpha / p[1] + alpha * alpha * p[1] / (1.0 + alpha);
      break;
    case Family::Weibull: {
      const double a = p[0];
      const double c = 1.0 + (a - 1.0) * alpha / a;
      g[0] = alpha / a + (alpha / (a * a)) * (digamma(c) - l1a);
      g[1] = alpha / p[1];
      break;
    }
  }
  for (double& v : g) v *= m;  // g held d log M
  return g;
}

double v_alpha(const ParamVector& p, double alpha, double x) {
  check_dpd_validity(p, alpha);
  const double lf = log_density(p, x);
  if (alpha == 0.0) return -lf;
  return dpd_mass_integral(p, alpha) - (1.0 + 1.0 / alpha) * std::exp(alpha * lf);
}

}  // namespace mdpd
