#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

inline constexpr std::size_t kPlotCurvePoints = 512;

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double density = 0.0;
};

struct CurvePoint {
  double x = 0.0;
  double f = 0.0;
};

struct PlotData {
  std::vector<HistogramBin> histogram;  // equal-width bins over [0, max], area 1
  std::vector<CurvePoint> curve;        // fitted density over [0, 1.1 max]
};

PlotData emit_plot_data(const FitResult& fit, const Sample& sample, std::size_t bins);

/// Density at x >= 0; at x = 0 the right limit (possibly infinite).
double density_or_limit(const ParamVector& p, double x);

/// Two CSV blocks separated by a blank line: `bin_left,bin_right,density` then `x,f(x)`.
void write_plot_data(std::ostream& out, const PlotData& data);

}  // namespace mdpd
