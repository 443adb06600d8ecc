// Serial reference vs OpenMP campaign kernels on identical workloads.

#include <benchmark/benchmark.h>

#include "oqs/campaign.hpp"

using namespace oqs;

namespace {

CampaignSpec spec(Index dim, Index channels, Index realizations) {
  CampaignSpec s;
  s.ensemble.dim = dim;
  s.ensemble.seed = 7;
  s.kappa.assign(static_cast<std::size_t>(channels), 0.5);
  s.realizations = realizations;
  s.grid = {-20.0, 20.0, 40};
  return s;
}

void resonances(benchmark::State& state, Execution mode) {
  const CampaignSpec s = spec(state.range(0), 1, 32);
  for (auto _ : state) benchmark::DoNotOptimize(resonance_campaign(s, mode).widths.data());
  state.SetItemsProcessed(state.iterations() * s.realizations);
}

void scattering(benchmark::State& state, Execution mode) {
  const CampaignSpec s = spec(state.range(0), 10, 16);
  for (auto _ : state) benchmark::DoNotOptimize(scattering_campaign(s, {}, mode).total_mean);
  state.SetItemsProcessed(state.iterations() * s.realizations);
}

}  // namespace

BENCHMARK_CAPTURE(resonances, serial, Execution::serial)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(resonances, parallel, Execution::parallel)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(scattering, serial, Execution::serial)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(scattering, parallel, Execution::parallel)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
