#include "mdpd/uncertainty.hpp"

#include <cmath>
#include <ostream>

#include "mdpd/error.hpp"
#include "mdpd/parallel.hpp"
#include "mdpd/random.hpp"

namespace mdpd {
namespace {

constexpr std::uint64_t kBaseStream = 0;
constexpr std::uint64_t kMixStream = 1;
constexpr std::uint64_t kContaminantStream = 2;

}  // namespace

Sample sample_family(const ParamVector& theta, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, kBaseStream);
  std::vector<double> values(n);
  for (auto& v : values) v = quantile(theta, rng.uniform01());
  return Sample(std::move(values));
}

void ContaminationScheme::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw DomainError("contamination epsilon must lie in [0, 0.5)");
  if (const double* y = std::get_if<double>(&contaminant); y && !(*y > 0.0 && std::isfinite(*y)))
    throw DomainError("contamination point must be positive");
}

Sample simulate_contaminated(const ParamVector& base, const ContaminationScheme& scheme, std::size_t n) {
  scheme.validate();
  CounterRng base_rng(scheme.seed, kBaseStream);
  CounterRng mix_rng(scheme.seed, kMixStream);
  CounterRng other_rng(scheme.seed, kContaminantStream);
  std::vector<double> values(n);
  for (auto& v : values) {
    const double u = base_rng.uniform01();
    const double m = mix_rng.uniform01();
    const double w = other_rng.uniform01();
    if (m < scheme.epsilon) {
      if (const double* y = std::get_if<double>(&scheme.contaminant)) v = *y;
      else v = quantile(std::get<ParamVector>(scheme.contaminant), w);
    } else {
      v = quantile(base, u);
    }
  }
  return Sample(std::move(values));
}

BootstrapResult bootstrap_se(Family family, double alpha, const Sample& sample, std::size_t replicates,
                             std::uint64_t seed, const BootstrapOptions& options) {
  if (replicates < 2) throw DomainError("bootstrap needs at least 2 replicates");
  BootstrapResult result;
  result.fit = fit(family, alpha, sample, std::nullopt, options.fit);
  result.replicates = replicates;
  const std::size_t n = sample.size();
  const std::size_t p = param_count(family);

  std::vector<std::optional<std::vector<double>>> estimates(replicates);
  parallel_for(
      replicates,
      [&](std::size_t r) {
        CounterRng rng(derive_seed(seed, r), 0);
        std::vector<double> values(n);
        for (auto& v : values) v = sample[static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n))];
        try {
          FitOptions fo = options.fit;
          fo.scan_roots = false;
          const FitResult rep = fit(family, alpha, Sample(std::move(values)), result.fit.theta_hat, fo);
          if (rep.converged) estimates[r] = rep.theta_hat.to_vector();
        } catch (const Error&) {
          // counted as a failure below
        }
      },
      options.threads);

  for (std::size_t r = 0; r < replicates; ++r) {
    if (estimates[r]) result.replicate_estimates.push_back({r, *estimates[r]});
    else ++result.failures;
  }
  const std::size_t ok = result.replicate_estimates.size();
  if (ok < 2) throw BootstrapError("bootstrap: fewer than two replicates converged");
  if (static_cast<double>(result.failures) > 0.05 * static_cast<double>(replicates))
    result.warnings.push_back(std::to_string(result.failures) + " of " + std::to_string(replicates) +
                              " bootstrap replicates failed");

  result.se.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double m = 0.0;
    for (const auto& rep : result.replicate_estimates) m += rep.estimate[j];
    m /= static_cast<double>(ok);
    double ss = 0.0;
    for (const auto& rep : result.replicate_estimates) ss += (rep.estimate[j] - m) * (rep.estimate[j] - m);
    result.se[j] = std::sqrt(ss / static_cast<double>(ok - 1));
  }
  return result;
}

void write_replicates_csv(std::ostream& out, const BootstrapResult& result) {
  const auto names = param_names(result.fit.family);
  out << "replicate,param,value\n";
  const auto old = out.precision(17);
  for (const auto& rep : result.replicate_estimates)
    for (std::size_t j = 0; j < rep.estimate.size(); ++j) out << rep.index << ',' << names[j] << ',' << rep.estimate[j] << '\n';
  out.precision(old);
}

}  // namespace mdpd
