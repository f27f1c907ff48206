#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdpd {

/// The four candidate rainfall models. Gamma and Weibull use the rate
/// parameterisation: Weibull density is a b (bx)^(a-1) exp(-(bx)^a).
enum class Family { Exponential, Gamma, Lognormal, Weibull };

inline constexpr std::array<Family, 4> kAllFamilies = {Family::Exponential, Family::Gamma, Family::Lognormal,
                                                       Family::Weibull};
inline constexpr std::size_t kMaxParams = 2;

constexpr std::size_t param_count(Family f) { return f == Family::Exponential ? 1 : 2; }
std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);
/// ("lambda") | ("a", "b") | ("mu", "sigma") | ("a", "b")
std::span<const std::string_view> param_names(Family f);

/// Parameter values of one family, validated on construction.
class ParamVector {
 public:
  ParamVector(Family family, std::span<const double> values);

  static ParamVector exponential(double lambda);
  static ParamVector gamma(double shape, double rate);
  static ParamVector lognormal(double mu, double sigma);
  static ParamVector weibull(double shape, double rate);

  Family family() const noexcept { return family_; }
  std::size_t size() const noexcept { return param_count(family_); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return {values_.data(), size()}; }
  std::vector<double> to_vector() const { return {values_.begin(), values_.begin() + size()}; }

  /// Gamma and Weibull need shape > alpha / (1 + alpha) for the DPD integral.
  bool dpd_valid(double alpha) const noexcept;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  Family family_;
  std::array<double, kMaxParams> values_{};
};

/// Throws DpdValidityError unless p.dpd_valid(alpha); DomainError for alpha < 0.
void check_dpd_validity(const ParamVector& p, double alpha);

double log_density(const ParamVector& p, double x);
double density(const ParamVector& p, double x);
double cdf(const ParamVector& p, double x);
double quantile(const ParamVector& p, double q);
double mean(const ParamVector& p);

/// d log f / d theta at x, one entry per parameter.
std::vector<double> score(const ParamVector& p, double x);

/// Integral of f^(1 + alpha) over (0, inf), closed form for every family.
double dpd_mass_integral(const ParamVector& p, double alpha);

/// Gradient of dpd_mass_integral with respect to the parameters. Since
/// d/dtheta of the integral of f^(1+alpha) is (1 + alpha) times the integral
/// of u f^(1+alpha), this also gives xi in closed form.
std::vector<double> dpd_mass_gradient(const ParamVector& p, double alpha);

/// Per-observation DPD term: M - (1 + 1/alpha) f^alpha(x) for alpha > 0 and
/// -log f(x) at alpha = 0. The constant g-term is dropped, so the alpha > 0
/// branch does not tend to the alpha = 0 branch as alpha -> 0.
double v_alpha(const ParamVector& p, double alpha, double x);

namespace detail {

/// Parameter-dependent constants hoisted out of per-observation loops.
/// Callers supply log(x) alongside x.
class Kernel {
 public:
  explicit Kernel(const ParamVector& p);

  double log_density(double x, double log_x) const;
  void score(double x, double log_x, double* out) const;

 private:
  Family family_;
  double p0_;
  double p1_;
  double log_norm_ = 0.0;
  double aux_ = 0.0;
};

double gamma_quantile(double shape, double rate, double q);

}  // namespace detail

}  // namespace mdpd
