#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/family.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

inline constexpr std::size_t kDefaultBootstrapReplicates = 1000;

struct BootstrapReplicate {
  std::size_t index = 0;
  std::vector<double> estimate;
};

struct BootstrapResult {
  FitResult fit;
  std::size_t replicates = kDefaultBootstrapReplicates;  // B
  std::vector<double> se;
  /// Converged replicates only, in replicate order.
  std::vector<BootstrapReplicate> replicate_estimates;
  std::size_t failures = 0;
  std::vector<std::string> warnings;
};

struct BootstrapOptions {
  FitOptions fit{};
  std::size_t threads = 0;  // 0: default_thread_count()
};

/// Nonparametric bootstrap of the MDPDE. Replicate r resamples with its own
/// Philox stream, so results do not depend on the thread count.
BootstrapResult bootstrap_se(Family family, double alpha, const Sample& sample, std::size_t replicates,
                             std::uint64_t seed, const BootstrapOptions& options = {});

/// CSV `replicate,param,value`.
void write_replicates_csv(std::ostream& out, const BootstrapResult& result);

/// Inverse-CDF draws; observation i uses draw i of stream 0 of the seed.
Sample sample_family(const ParamVector& theta, std::size_t n, std::uint64_t seed);

/// Mixture (1 - epsilon) F_theta + epsilon * contaminant, where the
/// contaminant is a point mass at y or another distribution.
struct ContaminationScheme {
  double epsilon = 0.0;
  std::variant<double, ParamVector> contaminant = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Observation i is contaminated when draw i of stream 1 falls below
/// epsilon; base draws reuse sample_family's stream, so epsilon = 0
/// reproduces sample_family exactly.
Sample simulate_contaminated(const ParamVector& base, const ContaminationScheme& scheme, std::size_t n);

}  // namespace mdpd
