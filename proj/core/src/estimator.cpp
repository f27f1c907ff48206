#include "mdpd/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mdpd/error.hpp"
#include "mdpd/integrals.hpp"
#include "mdpd/special.hpp"

namespace mdpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= kMaxAlpha))
    throw DomainError("alpha must lie in [0, " + std::to_string(kMaxAlpha) + "], got " + std::to_string(alpha));
}

void check_sample(const Sample& sample) {
  if (sample.empty()) throw InsufficientDataError("objective needs a non-empty sample");
}

// Mean of v_alpha without validation; assumes theta valid at alpha.
double h_unchecked(const ParamVector& theta, double alpha, const Sample& sample) {
  const detail::Kernel kernel(theta);
  const auto xs = sample.values();
  const auto ls = sample.log_values();
  double acc = 0.0;
  if (alpha == 0.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) acc -= kernel.log_density(xs[i], ls[i]);
    return acc / static_cast<double>(xs.size());
  }
  for (std::size_t i = 0; i < xs.size(); ++i) acc += std::exp(alpha * kernel.log_density(xs[i], ls[i]));
  return dpd_mass_integral(theta, alpha) - (1.0 + 1.0 / alpha) * acc / static_cast<double>(xs.size());
}

// mean of u f^alpha
std::array<double, kMaxParams> weighted_score_mean(const ParamVector& theta, double alpha, const Sample& sample) {
  const detail::Kernel kernel(theta);
  const auto xs = sample.values();
  const auto ls = sample.log_values();
  std::array<double, kMaxParams> acc{};
  double u[kMaxParams];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    kernel.score(xs[i], ls[i], u);
    const double w = alpha == 0.0 ? 1.0 : std::exp(alpha * kernel.log_density(xs[i], ls[i]));
    for (std::size_t j = 0; j < theta.size(); ++j) acc[j] += u[j] * w;
  }
  for (double& v : acc) v /= static_cast<double>(xs.size());
  return acc;
}

std::vector<double> gradient_unchecked(const ParamVector& theta, double alpha, const Sample& sample) {
  std::vector<double> g = dpd_mass_gradient(theta, alpha);
  const auto s = weighted_score_mean(theta, alpha, sample);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= (1.0 + alpha) * s[j];
  return g;
}

// Optimisation coordinates: log of every positive parameter, mu as is.
bool is_log_coordinate(Family f, std::size_t i) { return !(f == Family::Lognormal && i == 0); }

std::vector<double> to_z(const ParamVector& p) {
  std::vector<double> z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) z[i] = is_log_coordinate(p.family(), i) ? std::log(p[i]) : p[i];
  return z;
}

std::optional<ParamVector> from_z(Family f, std::span<const double> z) {
  std::array<double, kMaxParams> v{};
  for (std::size_t i = 0; i < z.size(); ++i) {
    v[i] = is_log_coordinate(f, i) ? std::exp(z[i]) : z[i];
    if (!std::isfinite(v[i]) || (is_log_coordinate(f, i) && !(v[i] > 0.0))) return std::nullopt;
  }
  return ParamVector(f, std::span<const double>(v.data(), z.size()));
}

class Problem {
 public:
  Problem(Family family, double alpha, const Sample& sample) : family_(family), alpha_(alpha), sample_(sample) {}

  double value(std::span<const double> z) {
    ++evaluations;
    const auto p = from_z(family_, z);
    if (!p || !p->dpd_valid(alpha_)) return kInf;
    const double v = h_unchecked(*p, alpha_, sample_);
    return std::isfinite(v) ? v : kInf;
  }

  // Gradient in z coordinates; nullopt when outside the valid region.
  std::optional<std::vector<double>> gradient(std::span<const double> z) {
    ++evaluations;
    const auto p = from_z(family_, z);
    if (!p || !p->dpd_valid(alpha_)) return std::nullopt;
    std::vector<double> g = gradient_unchecked(*p, alpha_, sample_);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (is_log_coordinate(family_, i)) g[i] *= (*p)[i];
      if (!std::isfinite(g[i])) return std::nullopt;
    }
    return g;
  }

  std::size_t evaluations = 0;

 private:
  Family family_;
  double alpha_;
  const Sample& sample_;
};

// Damped Newton with central-difference Hessian of the analytic gradient.
bool newton(Problem& problem, std::vector<double>& z, double& value) {
  const std::size_t k = z.size();
  constexpr double h = 1e-5;
  for (int iter = 0; iter < 50; ++iter) {
    const auto g = problem.gradient(z);
    if (!g) return false;
    std::array<double, 4> hess{};
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      const auto gp = problem.gradient(zp);
      const auto gm = problem.gradient(zm);
      if (!gp || !gm) return false;
      for (std::size_t i = 0; i < k; ++i) hess[i * k + j] = ((*gp)[i] - (*gm)[i]) / (2.0 * h);
    }
    std::vector<double> d(k);
    if (k == 1) {
      if (!(hess[0] > 0.0)) return false;
      d[0] = -(*g)[0] / hess[0];
    } else {
      const double off = 0.5 * (hess[1] + hess[2]);
      const double det = hess[0] * hess[3] - off * off;
      if (!(hess[0] > 0.0) || !(det > 0.0)) return false;
      d[0] = -(hess[3] * (*g)[0] - off * (*g)[1]) / det;
      d[1] = -(hess[0] * (*g)[1] - off * (*g)[0]) / det;
    }
    double step_norm = 0.0;
    for (double v : d) step_norm = std::max(step_norm, std::abs(v));
    const double slope = std::inner_product(d.begin(), d.end(), g->begin(), 0.0);

    double t = 1.0;
    std::vector<double> trial(k);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < k; ++i) trial[i] = z[i] + t * d[i];
      const double f = problem.value(trial);
      if (f <= value + 1e-4 * t * slope) {
        z = trial;
        value = f;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    // At the optimum the decrease drops below round-off; a tiny Newton step
    // is then convergence rather than failure.
    if (step_norm * t < 1e-10 || (!accepted && step_norm < 1e-7)) return true;
    if (!accepted) return false;
  }
  return false;
}

double exponential_residual(double lambda, double alpha, const Sample& sample) {
  const auto xs = sample.values();
  double acc = 0.0;
  for (double x : xs) acc += (1.0 / lambda - x) * std::exp(alpha * (std::log(lambda) - lambda * x));
  acc /= static_cast<double>(xs.size());
  return acc - alpha * std::pow(lambda, alpha - 1.0) / ((1.0 + alpha) * (1.0 + alpha));
}

bool all_equal(const Sample& s) {
  const auto v = s.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double objective_h(const ParamVector& theta, double alpha, const Sample& sample) {
  check_sample(sample);
  check_dpd_validity(theta, alpha);
  return h_unchecked(theta, alpha, sample);
}

std::vector<double> objective_gradient(const ParamVector& theta, double alpha, const Sample& sample) {
  check_sample(sample);
  check_dpd_validity(theta, alpha);
  return gradient_unchecked(theta, alpha, sample);
}

std::vector<double> estimating_residual(const ParamVector& theta, double alpha, const Sample& sample) {
  check_sample(sample);
  check_dpd_validity(theta, alpha);
  const auto s = weighted_score_mean(theta, alpha, sample);
  std::vector<double> integral;
  if (theta.family() == Family::Exponential) {
    const double l = theta[0];
    integral = {alpha * std::pow(l, alpha - 1.0) / ((1.0 + alpha) * (1.0 + alpha))};
  } else {
    integral = xi_by_quadrature(theta, alpha, model_quadrature_spec(theta));
  }
  std::vector<double> r(theta.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = s[j] - integral[j];
  return r;
}

std::vector<double> dpd_weights(const ParamVector& theta, double alpha, const Sample& sample) {
  check_dpd_validity(theta, alpha);
  const detail::Kernel kernel(theta);
  std::vector<double> w(sample.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = alpha == 0.0 ? 1.0 : std::exp(alpha * kernel.log_density(sample[i], sample.log_values()[i]));
  return w;
}

ParamVector initial_estimate(Family family, const Sample& sample) {
  check_sample(sample);
  const double n = static_cast<double>(sample.size());
  const double m = sample.mean();
  switch (family) {
    case Family::Exponential:
      return ParamVector::exponential(1.0 / m);
    case Family::Gamma: {
      double var = 0.0;
      for (double x : sample.values()) var += (x - m) * (x - m);
      var /= n;
      if (!(var > 0.0)) throw DegenerateSampleError("gamma start: sample has zero variance");
      return ParamVector::gamma(m * m / var, m / var);
    }
    case Family::Lognormal: {
      const auto ls = sample.log_values();
      const double lm = std::accumulate(ls.begin(), ls.end(), 0.0) / n;
      double lv = 0.0;
      for (double l : ls) lv += (l - lm) * (l - lm);
      lv /= n;
      if (!(lv > 0.0)) throw DegenerateSampleError("lognormal start: log-sample has zero variance");
      return ParamVector::lognormal(lm, std::sqrt(lv));
    }
    case Family::Weibull: {
      // ln(-ln(1 - F)) = a ln x + a ln b on the empirical CDF
      const auto sorted = sample.sorted_values();
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = (static_cast<double>(i) + 0.5) / n;
        const double xl = std::log(sorted[i]);
        const double yl = std::log(-std::log1p(-f));
        sx += xl;
        sy += yl;
        sxx += xl * xl;
        sxy += xl * yl;
      }
      const double den = n * sxx - sx * sx;
      if (!(den > 0.0)) throw DegenerateSampleError("weibull start: sample has zero variance");
      const double a = std::clamp((n * sxy - sx * sy) / den, 0.05, 50.0);
      return ParamVector::weibull(a, std::exp(log_gamma(1.0 + 1.0 / a)) / m);
    }
  }
  throw DomainError("unknown family");
}

FitResult fit(Family family, double alpha, const Sample& sample, const std::optional<ParamVector>& warm_start,
              const FitOptions& options) {
  check_alpha(alpha);
  const std::size_t p = param_count(family);
  if (sample.size() < p + 1)
    throw InsufficientDataError(std::string(family_name(family)) + " fit needs at least " + std::to_string(p + 1) +
                                " positive observations, got " + std::to_string(sample.size()));
  if (p == 2 && all_equal(sample))
    throw DegenerateSampleError(std::string(family_name(family)) + " fit: all observations are equal");
  if (warm_start && warm_start->family() != family) throw DomainError("fit: warm start belongs to another family");

  FitResult result;
  result.family = family;
  result.alpha = alpha;
  result.n_obs = sample.size();

  ParamVector start = warm_start ? *warm_start : initial_estimate(family, sample);
  if (!start.dpd_valid(alpha)) {
    const double v[] = {1.0, start[1]};
    start = ParamVector(family, std::span<const double>(v, p));
  }

  Problem problem(family, alpha, sample);
  std::vector<double> z = to_z(start);
  double value = problem.value(z);
  if (!std::isfinite(value)) throw OptimizationError("fit: objective is not finite at the starting point");

  bool converged = false;
  if (warm_start && options.newton_polish) {
    std::vector<double> zn = z;
    double vn = value;
    if (newton(problem, zn, vn)) {
      z = zn;
      value = vn;
      converged = true;
    }
  }
  if (!converged) {
    OptimizerSpec spec = options.optimizer;
    if (warm_start) spec.initial_step = std::min(spec.initial_step, 0.05);
    const auto nm = minimize([&](std::span<const double> x) { return problem.value(x); }, z, spec);
    z = nm.argmin;
    value = nm.value;
    converged = nm.converged;
    if (options.newton_polish) {
      std::vector<double> zn = z;
      double vn = value;
      if (newton(problem, zn, vn) && vn <= value) {
        z = zn;
        value = vn;
        converged = true;
      }
    }
  }

  ParamVector theta = *from_z(family, z);

  if (family == Family::Exponential) {
    // Solve U_n = 0 next to the minimiser.
    const double lhat = theta[0];
    const auto u = [&](double l) { return exponential_residual(l, alpha, sample); };
    double lo = lhat, hi = lhat;
    double width = 1e-3;
    bool bracketed = false;
    for (int i = 0; i < 12 && !bracketed; ++i, width *= 4.0) {
      lo = lhat * (1.0 - std::min(width, 0.9));
      hi = lhat * (1.0 + width);
      bracketed = u(lo) * u(hi) <= 0.0;
    }
    if (bracketed) {
      const double root = find_root_bracketed(u, lo, hi);
      const ParamVector cand = ParamVector::exponential(root);
      const double v = h_unchecked(cand, alpha, sample);
      if (v <= value) {
        theta = cand;
        value = v;
      }
    }
    if (options.scan_roots && !warm_start && alpha > 0.0) {
      int changes = 0;
      double prev = u(lhat * std::exp(-5.0));
      for (int i = 1; i <= 80; ++i) {
        const double cur = u(lhat * std::exp(-5.0 + 10.0 * i / 80.0));
        if ((prev > 0.0) != (cur > 0.0)) ++changes;
        prev = cur;
      }
      if (changes > 1)
        result.warnings.push_back("estimating equation has " + std::to_string(changes) +
                                  " roots; using the one at the minimiser of H");
    }
  }

  result.theta_hat = theta;
  result.objective = value;
  result.converged = converged;
  result.evaluations = problem.evaluations;
  if (!converged) result.warnings.push_back("optimiser did not meet its tolerances");
  return result;
}

}  // namespace mdpd
