#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

/// Reads one numeric column (selected by header name) into a Sample. Zeros
/// are dropped and counted in dry_count. DataError rows are 1-based data
/// rows, the header excluded.
Sample read_csv(std::istream& in, const std::string& column, const std::string& label = {});
Sample load_csv(const std::filesystem::path& path, const std::string& column);

/// Writes `column` with full round-trip precision; dry records become zeros.
void write_csv(std::ostream& out, const Sample& sample, const std::string& column = "value");
void save_csv(const std::filesystem::path& path, const Sample& sample, const std::string& column = "value");

/// Wide panel: a `year` column (optional) plus one column per series.
struct PanelSeries {
  std::string label;
  Sample sample;
  std::string error;  // non-empty when the column could not be read
};

std::vector<PanelSeries> read_panel(std::istream& in);
std::vector<PanelSeries> load_panel(const std::filesystem::path& path);

struct OutlierSummary {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  double outlier_proportion = 0.0;  // percent of values strictly outside the fences
};

/// Quantile by linear interpolation of order statistics, h = (n - 1) p.
double empirical_quantile(std::vector<double> values, double p);

/// Tukey 1.5-IQR fences over the positive values. Needs n >= 4.
OutlierSummary outlier_summary(const Sample& sample);

/// Median of the zero-inflated distribution: 0 when the dry proportion p is
/// at least one half, otherwise the fitted quantile at (0.5 - p) / (1 - p).
double adjusted_median(const FitResult& fit, std::size_t dry_count, std::size_t n_wet);

}  // namespace mdpd
