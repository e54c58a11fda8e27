#include <benchmark/benchmark.h>

#include <memory>

#include "oneid/bounds.hpp"
#include "oneid/confidence.hpp"
#include "oneid/pseeb.hpp"
#include "oneid/see_engine.hpp"

using namespace oneid;

static void BM_Radius(benchmark::State& state) {
  std::uint64_t t = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radius(t, 0.05));
    t = t * 3 % 1'000'003;
  }
}
BENCHMARK(BM_Radius);

static void BM_SeeStep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) means[i] = 0.3 + 0.3 * static_cast<double>(i) / k;
  const BanditInstance inst(means, 0.5);
  std::vector<std::size_t> bracket(k);
  for (std::size_t i = 0; i < k; ++i) bracket[i] = i;
  SeeConfig cfg;
  cfg.mu0 = 0.5;
  cfg.delta = 0.05;
  cfg.num_arms = k;
  RngStream rng(1);
  auto engine = std::make_unique<SeeEngine>(bracket, cfg);
  for (auto _ : state) {
    if (!engine->step(inst, rng).pulled()) {
      state.PauseTiming();
      engine = std::make_unique<SeeEngine>(bracket, cfg);
      state.ResumeTiming();
    }
  }
}
BENCHMARK(BM_SeeStep)->Arg(2)->Arg(8)->Arg(64);

static void BM_PseebTrial(benchmark::State& state) {
  const BanditInstance inst({0.95, 0.05}, 0.5);
  PseebOptions opt;
  std::uint64_t i = 0;
  std::uint64_t draws = 0;
  for (auto _ : state) {
    const PseebOutcome out = pseeb_run(inst, opt, RngStream(derive_seed(1, i++)));
    draws += out.tau;
    benchmark::DoNotOptimize(out.answer);
  }
  state.counters["draws/trial"] =
      benchmark::Counter(static_cast<double>(draws) / static_cast<double>(state.iterations()));
}
BENCHMARK(BM_PseebTrial)->Unit(benchmark::kMicrosecond);

static void BM_LowerBoundSolver(benchmark::State& state) {
  const BanditInstance inst({0.9, 0.8, 0.75, 0.5, 0.3, 0.1}, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lb_program(inst, 0.01).program_value);
}
BENCHMARK(BM_LowerBoundSolver)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
