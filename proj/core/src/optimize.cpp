#include "mdpd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mdpd/error.hpp"
#include "mdpd/random.hpp"

namespace mdpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimplexRun {
  std::vector<double> best;
  double value;
  bool converged;
};

// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
SimplexRun nelder_mead(const Objective& eval, std::vector<double> start, double start_value,
                       std::span<const double> steps, const OptimizerSpec& spec, int& evaluations) {
  const std::size_t k = start.size();
  std::vector<std::vector<double>> pts(k + 1, start);
  std::vector<double> vals(k + 1, start_value);
  for (std::size_t i = 0; i < k; ++i) {
    pts[i + 1][i] += steps[i];
    vals[i + 1] = eval(pts[i + 1]);
    ++evaluations;
  }

  std::vector<std::size_t> order(k + 1);
  std::vector<double> centroid(k), trial(k), trial2(k);
  const auto at = [&](const std::vector<double>& base, double coef, std::vector<double>& out) {
    for (std::size_t j = 0; j < k; ++j) out[j] = centroid[j] + coef * (base[j] - centroid[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[k - 1];

    double diameter = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = 0; j < k; ++j) diameter = std::max(diameter, std::abs(pts[i][j] - pts[lo][j]));
    for (std::size_t j = 0; j < k; ++j) scale = std::max(scale, std::abs(pts[lo][j]));
    const bool params_ok = diameter <= spec.param_tolerance * (1.0 + scale);
    const bool values_ok =
        std::isfinite(vals[hi]) && (vals[hi] - vals[lo]) <= spec.objective_tolerance * (1.0 + std::abs(vals[lo]));
    if (params_ok && values_ok) return {pts[lo], vals[lo], true};
    if (evaluations >= spec.max_evaluations) return {pts[lo], vals[lo], false};

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      if (i == hi) continue;
      for (std::size_t j = 0; j < k; ++j) centroid[j] += pts[i][j] / static_cast<double>(k);
    }

    at(pts[hi], -1.0, trial);
    const double fr = eval(trial);
    ++evaluations;
    if (fr < vals[lo]) {
      at(pts[hi], -2.0, trial2);
      const double fe = eval(trial2);
      ++evaluations;
      if (fe < fr) {
        pts[hi] = trial2;
        vals[hi] = fe;
      } else {
        pts[hi] = trial;
        vals[hi] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[hi] = trial;
      vals[hi] = fr;
      continue;
    }
    // contraction: outside if the reflected point beats the worst, else inside
    const bool outside = fr < vals[hi];
    at(pts[hi], outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    ++evaluations;
    if (fc < (outside ? fr : vals[hi])) {
      pts[hi] = trial2;
      vals[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= k; ++i) {
      if (i == lo) continue;
      for (std::size_t j = 0; j < k; ++j) pts[i][j] = pts[lo][j] + 0.5 * (pts[i][j] - pts[lo][j]);
      vals[i] = eval(pts[i]);
      ++evaluations;
    }
  }
}

}  // namespace

void OptimizerSpec::validate() const {
  if (!(param_tolerance > 0.0) || !(objective_tolerance > 0.0)) throw DomainError("OptimizerSpec: tolerances must be positive");
  if (max_evaluations < 1 || restart_count < 0) throw DomainError("OptimizerSpec: invalid evaluation or restart count");
  if (!(initial_step > 0.0)) throw DomainError("OptimizerSpec: initial_step must be positive");
}

MinimizeResult minimize(const Objective& objective, std::span<const double> start, const OptimizerSpec& spec) {
  spec.validate();
  if (start.empty()) throw DomainError("minimize: empty start point");
  const Objective eval = [&objective](std::span<const double> x) {
    const double v = objective(x);
    return std::isfinite(v) ? v : kInf;
  };

  std::vector<double> x(start.begin(), start.end());
  const double f0 = objective(x);
  if (!std::isfinite(f0)) throw OptimizationError("minimize: objective is not finite at the start point");

  int evaluations = 1;
  std::vector<double> steps(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) steps[j] = spec.initial_step * std::max(1.0, std::abs(x[j]));
  SimplexRun run = nelder_mead(eval, x, f0, steps, spec, evaluations);

  // Restart from the incumbent with a randomly perturbed simplex to escape
  // premature collapse.
  CounterRng rng(spec.seed);
  for (int r = 0; r < spec.restart_count && evaluations < spec.max_evaluations; ++r) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double u = rng.uniform01();
      const double sign = u < 0.5 ? -1.0 : 1.0;
      steps[j] = sign * spec.initial_step * (0.5 + u) * std::max(1.0, std::abs(run.best[j]));
    }
    SimplexRun next = nelder_mead(eval, run.best, run.value, steps, spec, evaluations);
    const bool improved = next.value < run.value;
    if (next.value <= run.value) run = std::move(next);
    else run.converged = run.converged && next.converged;
    if (!improved && run.converged) break;
  }
  return {run.best, run.value, run.converged, evaluations};
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw BracketError("find_root_bracketed: function is NaN at an endpoint");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketError("find_root_bracketed: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

  double c = a, fc = fa;
  double d = b - a, e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5e-12 * (1.0 + std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, or secant when only two points
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw BracketError("find_root_bracketed: function became NaN");
  }
  return b;
}

double invert_cdf(const std::function<double(double)>& cdf, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("invert_cdf: probability must lie in (0, 1)");
  double lo = 1.0, hi = 1.0;
  if (cdf(1.0) < p) {
    while (cdf(hi) < p) {
      lo = hi;
      hi *= 2.0;
      if (!(hi < 1e308)) throw InversionError("invert_cdf: upper bracket overflowed");
    }
  } else {
    while (cdf(lo) >= p) {
      hi = lo;
      lo *= 0.5;
      if (!(lo > 1e-308)) throw InversionError("invert_cdf: lower bracket underflowed");
    }
  }
  // invariant: cdf(lo) < p <= cdf(hi); bisect in log space until the bracket collapses
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    if (cdf(mid) < p) lo = mid;
    else hi = mid;
  }
  const double f_lo = cdf(lo), f_hi = cdf(hi);
  const double x = (p - f_lo <= f_hi - p) ? lo : hi;
  if (!(std::abs(cdf(x) - p) <= 1e-8)) throw InversionError("invert_cdf: did not reach the requested accuracy");
  return x;
}

}  // namespace mdpd
