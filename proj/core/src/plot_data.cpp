#include "mdpd/plot_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "mdpd/error.hpp"
#include "mdpd/family.hpp"

namespace mdpd {

double density_or_limit(const ParamVector& p, double x) {
  if (x > 0.0) return density(p, x);
  if (x < 0.0) return 0.0;
  switch (p.family()) {
    case Family::Exponential: return p[0];
    case Family::Lognormal: return 0.0;
    case Family::Gamma:
    case Family::Weibull:
      if (p[0] > 1.0) return 0.0;
      if (p[0] < 1.0) return std::numeric_limits<double>::infinity();
      return p[1];
  }
  return 0.0;
}

PlotData emit_plot_data(const FitResult& fit, const Sample& sample, std::size_t bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (sample.empty()) throw InsufficientDataError("plot data of an empty sample");
  const auto values = sample.values();
  const double max = *std::max_element(values.begin(), values.end());
  const double width = max / static_cast<double>(bins);
  const double n = static_cast<double>(values.size());

  PlotData out;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) counts[std::min(bins - 1, static_cast<std::size_t>(v / width))]++;
  for (std::size_t k = 0; k < bins; ++k) {
    const double left = static_cast<double>(k) * width;
    const double right = k + 1 == bins ? max : static_cast<double>(k + 1) * width;
    out.histogram.push_back({left, right, static_cast<double>(counts[k]) / (n * width)});
  }

  const double hi = 1.1 * max;
  for (std::size_t i = 0; i < kPlotCurvePoints; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(kPlotCurvePoints - 1);
    out.curve.push_back({x, density_or_limit(fit.theta_hat, x)});
  }
  return out;
}

void write_plot_data(std::ostream& out, const PlotData& data) {
  const auto old = out.precision(12);
  out << "bin_left,bin_right,density\n";
  for (const auto& b : data.histogram) out << b.left << ',' << b.right << ',' << b.density << '\n';
  out << "\nx,f(x)\n";
  for (const auto& c : data.curve) out << c.x << ',' << c.f << '\n';
  out.precision(old);
}

}  // namespace mdpd
