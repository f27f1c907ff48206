#include "mdpd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <tuple>
#include <ostream>

#include "mdpd/asymptotics.hpp"
#include "mdpd/error.hpp"
#include "mdpd/parallel.hpp"

namespace mdpd {

double ric_from_fit(const FitResult& fit, const Sample& sample) {
  if (sample.empty()) throw InsufficientDataError("RIC of an empty sample");
  const SandwichMatrices s = sandwich(fit.theta_hat, fit.alpha);
  const double tr = (s.J.inverse() * s.K).trace();
  const double n = static_cast<double>(sample.size());
  return objective_h(fit.theta_hat, fit.alpha, sample) + tr / ((1.0 + fit.alpha) * n);
}

double ric(Family family, double alpha, const Sample& sample, const FitOptions& options) {
  const FitResult f = fit(family, alpha, sample, std::nullopt, options);
  if (!f.converged) throw OptimizationError(std::string(family_name(family)) + " fit did not converge");
  return ric_from_fit(f, sample);
}

const FamilySelection& SelectionReport::winning() const {
  for (const auto& f : families)
    if (f.family == winner) return f;
  throw SelectionError("selection report has no winner");
}

namespace {

struct FamilySearch {
  std::optional<FamilySelection> best;
  std::vector<RicPoint> points;
  std::vector<std::string> warnings;
};

FamilySearch search_family(Family family, const Sample& sample, const SelectionOptions& options) {
  FamilySearch out;
  const std::string name(family_name(family));
  std::optional<ParamVector> warm;
  std::size_t failed = 0;

  const auto evaluate = [&](double alpha, const std::optional<ParamVector>& start) -> std::optional<double> {
    try {
      FitResult f = fit(family, alpha, sample, start, options.fit);
      if (!f.converged) throw OptimizationError("fit did not converge");
      const double r = ric_from_fit(f, sample);
      out.points.push_back({family, alpha, r});
      warm = f.theta_hat;
      if (!out.best || r < out.best->ric_min) out.best = FamilySelection{family, alpha, r, std::move(f)};
      return r;
    } catch (const Error&) {
      ++failed;
      return std::nullopt;
    }
  };

  const auto steps = static_cast<std::size_t>(std::llround(kMaxAlpha / options.grid_step));
  std::vector<std::optional<double>> grid;
  for (std::size_t k = 0; k <= steps; ++k) grid.push_back(evaluate(std::min(kMaxAlpha, k * options.grid_step), warm));

  if (!out.best) {
    out.warnings.push_back(name + " excluded: every fit failed");
    return out;
  }
  if (failed > 0) out.warnings.push_back(name + ": " + std::to_string(failed) + " grid fits failed");

  if (!options.fast) {
    const double centre = out.best->alpha_star_ric;
    const ParamVector start = out.best->fit.theta_hat;
    double lo = std::max(0.0, centre - options.grid_step);
    double hi = std::min(kMaxAlpha, centre + options.grid_step);
    const auto value = [&](double a) { return evaluate(a, start).value_or(INFINITY); };
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = value(x1);
    double f2 = value(x2);
    while (hi - lo > options.refine_width) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = value(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = value(x2);
      }
    }
  }
  return out;
}

std::size_t family_rank(Family f) {
  for (std::size_t i = 0; i < kAllFamilies.size(); ++i)
    if (kAllFamilies[i] == f) return i;
  return kAllFamilies.size();
}

}  // namespace

SelectionReport select_model(std::span<const Family> families, const Sample& sample, const SelectionOptions& options) {
  if (families.empty()) throw SelectionError("no candidate families");
  if (!(options.grid_step > 0.0 && options.grid_step <= kMaxAlpha)) throw DomainError("RIC grid step must lie in (0, 1]");

  std::vector<FamilySearch> searches(families.size());
  parallel_for(
      families.size(), [&](std::size_t i) { searches[i] = search_family(families[i], sample, options); }, options.threads);

  SelectionReport report;
  for (auto& s : searches) {
    report.ric_table.insert(report.ric_table.end(), s.points.begin(), s.points.end());
    report.warnings.insert(report.warnings.end(), s.warnings.begin(), s.warnings.end());
    if (s.best) report.families.push_back(std::move(*s.best));
  }
  if (report.families.empty()) throw SelectionError("every candidate family failed to fit");

  const FamilySelection* best = &report.families.front();
  for (const auto& f : report.families) {
    const auto key = [](const FamilySelection& x) {
      return std::tuple(x.ric_min, param_count(x.family), family_rank(x.family));
    };
    if (key(f) < key(*best)) best = &f;
  }
  report.winner = best->family;
  return report;
}

void write_ric_csv(std::ostream& out, const SelectionReport& report) {
  std::vector<RicPoint> rows = report.ric_table;
  std::stable_sort(rows.begin(), rows.end(), [](const RicPoint& a, const RicPoint& b) {
    if (a.family != b.family) return family_rank(a.family) < family_rank(b.family);
    return a.alpha < b.alpha;
  });
  out << "family,alpha,ric\n";
  const auto old = out.precision(12);
  for (const auto& r : rows) out << family_name(r.family) << ',' << r.alpha << ',' << r.ric << '\n';
  out.precision(old);
}

}  // namespace mdpd
