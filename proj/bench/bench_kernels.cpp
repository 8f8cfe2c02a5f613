// Serial reference vs OpenMP execution of the per-frame link kernels and the
// sweep. Results are bit-identical by construction; only wall time differs.

#include <benchmark/benchmark.h>

#include <random>

#include "dsvlc/delta_sigma.hpp"
#include "dsvlc/experiment.hpp"

namespace {

dsvlc::ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? dsvlc::ExecPolicy::serial : dsvlc::ExecPolicy::parallel;
}

void BM_RunLink(benchmark::State& state) {
  dsvlc::LinkConfig c;
  c.osr = static_cast<int>(state.range(1));
  c.frames = 32;
  for (auto _ : state) benchmark::DoNotOptimize(dsvlc::run_link(c, dsvlc::RunOptions{policy_of(state), false}).evm_percent);
  state.SetItemsProcessed(state.iterations() * c.frames);
}
BENCHMARK(BM_RunLink)->ArgNames({"parallel", "osr"})->ArgsProduct({{0, 1}, {8, 16, 32}})->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  dsvlc::LinkConfig c;
  c.frames = 10;
  for (auto _ : state)
    benchmark::DoNotOptimize(dsvlc::sweep_evm(c, {4, 8, 16, 32}, {2, 3, 4, 5}, policy_of(state)).rows.size());
}
BENCHMARK(BM_Sweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Modulate(benchmark::State& state) {
  const dsvlc::NtfDesign d = dsvlc::synthesize_ntf(static_cast<int>(state.range(0)), 1.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> x(8192);
  for (double& v : x) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(dsvlc::modulate(d, x).clip_count);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Modulate)->ArgName("order")->DenseRange(1, 5);

}  // namespace

BENCHMARK_MAIN();
