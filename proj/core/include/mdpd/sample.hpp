#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mdpd {

/// Positive observations (wet values) plus the number of zero records that
/// were removed at ingestion. Logs are cached because every family except
/// the exponential needs them per observation.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values, std::size_t dry_count = 0, std::string label = {});

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> log_values() const noexcept { return logs_; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::size_t dry_count() const noexcept { return dry_count_; }
  /// n + dry_count
  std::size_t record_count() const noexcept { return values_.size() + dry_count_; }
  const std::string& label() const noexcept { return label_; }

  /// Values in ascending order (stable for ties).
  std::vector<double> sorted_values() const;
  /// Same sample with the observation at position i removed.
  Sample without(std::size_t i) const;

  double mean() const;

 private:
  std::vector<double> values_;
  std::vector<double> logs_;
  std::size_t dry_count_ = 0;
  std::string label_;
};

}  // namespace mdpd
