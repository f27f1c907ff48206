#include "mdpd/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdpd/error.hpp"

namespace mdpd {

Sample::Sample(std::vector<double> values, std::size_t dry_count, std::string label)
    : values_(std::move(values)), dry_count_(dry_count), label_(std::move(label)) {
  logs_.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("sample value at position " + std::to_string(i) + " is not a positive finite number");
    logs_.push_back(std::log(v));
  }
}

std::vector<double> Sample::sorted_values() const {
  std::vector<double> s = values_;
  std::stable_sort(s.begin(), s.end());
  return s;
}

Sample Sample::without(std::size_t i) const {
  if (i >= values_.size()) throw DomainError("Sample::without: index out of range");
  Sample out;
  out.values_.reserve(values_.size() - 1);
  out.logs_.reserve(values_.size() - 1);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (j == i) continue;
    out.values_.push_back(values_[j]);
    out.logs_.push_back(logs_[j]);
  }
  out.dry_count_ = dry_count_;
  out.label_ = label_;
  return out;
}

double Sample::mean() const {
  if (values_.empty()) throw InsufficientDataError("mean of an empty sample");
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

}  // namespace mdpd
