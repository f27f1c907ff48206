#include "mdpd/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mdpd/error.hpp"
#include "mdpd/parallel.hpp"

namespace mdpd {
namespace {

FitOptions loo_fit_options(const TuningOptions& options) {
  FitOptions fo = options.fit;
  fo.scan_roots = false;
  return fo;
}

double cvm_from_fit(Family family, double alpha, const Sample& sorted, const FitResult& full,
                    const TuningOptions& options) {
  const std::size_t n = sorted.size();
  const double nd = static_cast<double>(n);
  const FitOptions fo = loo_fit_options(options);
  std::vector<double> terms(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        FitResult loo;
        try {
          loo = fit(family, alpha, sorted.without(i), full.theta_hat, fo);
        } catch (const Error& e) {
          throw TuningError("leave-one-out fit without order statistic " + std::to_string(i + 1) + " failed: " + e.what(), i);
        }
        if (!loo.converged)
          throw TuningError("leave-one-out fit without order statistic " + std::to_string(i + 1) + " did not converge", i);
        const double d = (static_cast<double>(i) + 0.5) / nd - cdf(loo.theta_hat, sorted[i]);
        terms[i] = d * d;
      },
      options.threads);
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / nd;
}

void check_tuning_sample(Family family, const Sample& sample) {
  const std::size_t need = param_count(family) + 2;
  if (sample.size() < need)
    throw InsufficientDataError("tuning " + std::string(family_name(family)) + " needs at least " + std::to_string(need) +
                                " observations");
}

}  // namespace

double cvm_distance(Family family, double alpha, const Sample& sample, const TuningOptions& options,
                    const std::optional<FitResult>& full_fit) {
  check_tuning_sample(family, sample);
  const Sample sorted(sample.sorted_values(), sample.dry_count(), sample.label());
  const FitResult full = full_fit ? *full_fit : fit(family, alpha, sorted, std::nullopt, options.fit);
  return cvm_from_fit(family, alpha, sorted, full, options);
}

TuningResult select_alpha(Family family, const Sample& sample, const TuningOptions& options) {
  check_tuning_sample(family, sample);
  if (!(options.grid_step > 0.0 && options.grid_step <= kMaxAlpha)) throw DomainError("tuning grid step must lie in (0, 1]");
  const Sample sorted(sample.sorted_values(), sample.dry_count(), sample.label());

  TuningResult result;
  result.family = family;
  const auto steps = static_cast<std::size_t>(std::llround(kMaxAlpha / options.grid_step));
  std::vector<FitResult> grid_fits;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double alpha = std::min(kMaxAlpha, static_cast<double>(k) * options.grid_step);
    grid_fits.push_back(fit(family, alpha, sorted, std::nullopt, options.fit));
    result.alpha_grid.push_back(alpha);
    result.cvmd_curve.push_back(cvm_from_fit(family, alpha, sorted, grid_fits.back(), options));
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < result.cvmd_curve.size(); ++k)
    if (result.cvmd_curve[k] < result.cvmd_curve[best]) best = k;
  result.alpha_star = result.alpha_grid[best];
  result.cvmd_star = result.cvmd_curve[best];
  result.fit_star = grid_fits[best];

  if (!options.fast) {
    const auto evaluate = [&](double alpha) {
      // warm start from the nearest grid fit
      std::size_t nearest = 0;
      for (std::size_t k = 1; k < result.alpha_grid.size(); ++k)
        if (std::abs(result.alpha_grid[k] - alpha) < std::abs(result.alpha_grid[nearest] - alpha)) nearest = k;
      FitResult f = fit(family, alpha, sorted, grid_fits[nearest].theta_hat, options.fit);
      const double v = cvm_from_fit(family, alpha, sorted, f, options);
      result.refinements.emplace_back(alpha, v);
      if (v < result.cvmd_star) {
        result.alpha_star = alpha;
        result.cvmd_star = v;
        result.fit_star = std::move(f);
      }
      return v;
    };

    constexpr double inv_phi = 0.6180339887498949;
    double lo = result.alpha_grid[best == 0 ? 0 : best - 1];
    double hi = result.alpha_grid[std::min(best + 1, result.alpha_grid.size() - 1)];
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = evaluate(x1);
    double f2 = evaluate(x2);
    while (hi - lo > options.refine_width) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = evaluate(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = evaluate(x2);
      }
    }
  }
  return result;
}

void write_cvmd_csv(std::ostream& out, const TuningResult& result) {
  std::vector<std::pair<double, double>> rows;
  for (std::size_t k = 0; k < result.alpha_grid.size(); ++k) rows.emplace_back(result.alpha_grid[k], result.cvmd_curve[k]);
  rows.insert(rows.end(), result.refinements.begin(), result.refinements.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "alpha,cvmd\n";
  const auto old = out.precision(12);
  for (const auto& [a, v] : rows) out << a << ',' << v << '\n';
  out.precision(old);
}

}  // namespace mdpd
