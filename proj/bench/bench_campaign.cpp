#include <benchmark/benchmark.h>

#include "rsdual/checks.hpp"

namespace {

rsd::CampaignConfig config() {
  rsd::CampaignConfig cfg;
  cfg.n = 3;
  cfg.y = 0.3;
  cfg.seed = 7;
  return cfg;
}

void run(benchmark::State& state, const char* check, rsd::Execution exec) {
  const auto cfg = config();
  const auto& spec = rsd::find_check(check);
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rsd::run_check_trials(spec, cfg, trials, exec));
  state.SetItemsProcessed(state.iterations() * trials);
  state.counters["threads"] = exec == rsd::Execution::Parallel ? rsd::worker_threads() : 1;
}

void BM_DualitySerial(benchmark::State& s) { run(s, "duality.exchange_positions", rsd::Execution::Serial); }
void BM_DualityParallel(benchmark::State& s) { run(s, "duality.exchange_positions", rsd::Execution::Parallel); }
void BM_FlowSerial(benchmark::State& s) { run(s, "flows.action_conservation", rsd::Execution::Serial); }
void BM_FlowParallel(benchmark::State& s) { run(s, "flows.action_conservation", rsd::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_DualitySerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DualityParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowParallel)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
