#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/family.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

struct TuningOptions {
  double grid_step = 0.05;
  /// Golden-section refinement stops once the bracket is this narrow.
  double refine_width = 1e-3;
  /// Grid only, no refinement.
  bool fast = false;
  FitOptions fit{};
  std::size_t threads = 0;  // leave-one-out fits; 0: default_thread_count()
};

struct TuningResult {
  Family family = Family::Exponential;
  std::vector<double> alpha_grid;
  std::vector<double> cvmd_curve;                       // aligned with alpha_grid
  std::vector<std::pair<double, double>> refinements;  // (alpha, cvmd) from golden-section
  double alpha_star = 0.0;
  double cvmd_star = 0.0;
  FitResult fit_star;
};

/// Leave-one-out Cramer-von Mises distance
///   (1/n) sum_i ((i - 0.5)/n - F_{theta^(-i)}(x_(i)))^2
/// over the order statistics. Leave-one-out fits warm-start from the
/// full-sample fit (computed here unless supplied).
double cvm_distance(Family family, double alpha, const Sample& sample, const TuningOptions& options = {},
                    const std::optional<FitResult>& full_fit = std::nullopt);

/// Global grid over [0, 1] followed by golden-section refinement around the
/// best grid point. Grid ties go to the smaller alpha.
TuningResult select_alpha(Family family, const Sample& sample, const TuningOptions& options = {});

/// CSV `alpha,cvmd` of every evaluated alpha, ascending.
void write_cvmd_csv(std::ostream& out, const TuningResult& result);

}  // namespace mdpd
