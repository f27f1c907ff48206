#include <benchmark/benchmark.h>

#include "mdpd/asymptotics.hpp"
#include "mdpd/estimator.hpp"
#include "mdpd/tuning.hpp"
#include "mdpd/uncertainty.hpp"

using namespace mdpd;

namespace {

ParamVector truth(Family f) {
  switch (f) {
    case Family::Exponential: return ParamVector::exponential(0.02);
    case Family::Gamma: return ParamVector::gamma(5, 0.05);
    case Family::Lognormal: return ParamVector::lognormal(5, 0.4);
    case Family::Weibull: return ParamVector::weibull(2, 0.01);
  }
  return ParamVector::exponential(1.0);
}

Family family_arg(const benchmark::State& state) { return kAllFamilies[static_cast<std::size_t>(state.range(0))]; }

void BM_Objective(benchmark::State& state) {
  const Family f = family_arg(state);
  const Sample s = sample_family(truth(f), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(objective_h(truth(f), 0.5, s));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Objective)->ArgsProduct({{0, 1, 2, 3}, {100, 1000}});

void BM_Fit(benchmark::State& state) {
  const Family f = family_arg(state);
  const Sample s = sample_family(truth(f), static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fit(f, 0.5, s));
}
BENCHMARK(BM_Fit)->ArgsProduct({{0, 1, 2, 3}, {100, 1000}})->Unit(benchmark::kMicrosecond);

void BM_Sandwich(benchmark::State& state) {
  const Family f = family_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(sandwich(truth(f), 0.5, SandwichMethod::Quadrature));
}
BENCHMARK(BM_Sandwich)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_CvmDistance(benchmark::State& state) {
  const Family f = family_arg(state);
  const Sample s = sample_family(truth(f), 100, 3);
  TuningOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cvm_distance(f, 0.5, s, opts));
}
BENCHMARK(BM_CvmDistance)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
