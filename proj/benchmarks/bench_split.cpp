#include <benchmark/benchmark.h>

#include "fstspmd/bench.hpp"
#include "fstspmd/mdspp.hpp"
#include "fstspmd/oracle.hpp"
#include "fstspmd/search.hpp"
#include "generators.hpp"

namespace {

using namespace fstspmd;

void BM_Split(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = make_uniform_instance(n, 11);
  SolverParams params;
  params.max_drops = static_cast<int>(state.range(1));
  const TimingModel tm = make_timing_model(inst, params);
  Rng rng(3);
  const Tour tour = gen::random_tour(n, rng);
  SplitWorkspace ws;
  for (auto _ : state) benchmark::DoNotOptimize(split_completion(inst, tour, tm, ws));
}
BENCHMARK(BM_Split)
    ->Args({50, 1})->Args({50, 2})->Args({50, 10})
    ->Args({100, 2})->Args({100, 100})->Args({200, 2})->Args({200, 200})
    ->Unit(benchmark::kMicrosecond);

void BM_SplitWithPlan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = make_uniform_instance(n, 11);
  SolverParams params;
  params.max_drops = 2;
  const TimingModel tm = make_timing_model(inst, params);
  Rng rng(3);
  const Tour tour = gen::random_tour(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(split(inst, tour, tm));
}
BENCHMARK(BM_SplitWithPlan)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_ImprovementPhase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = make_uniform_instance(n, 11);
  SolverParams params;
  params.max_drops = static_cast<int>(state.range(1));
  const TimingModel tm = make_timing_model(inst, params);
  SplitWorkspace ws;
  for (auto _ : state) {
    state.PauseTiming();
    SearchState st;
    st.current = initial_tour(inst, params);
    st.benchmark = {st.current, split_completion(inst, st.current, tm, ws)};
    st.bsf = st.benchmark;
    state.ResumeTiming();
    benchmark::DoNotOptimize(improvement_phase(st, inst, tm, ws));
  }
}
BENCHMARK(BM_ImprovementPhase)->Args({50, 1})->Args({50, 2})->Args({50, 10})
    ->Unit(benchmark::kMillisecond);

void BM_SplitOracleRestricted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = make_uniform_instance(n, 5);
  SolverParams params;
  params.max_drops = n;
  const TimingModel tm = make_timing_model(inst, params);
  const Tour tour = identity_tour(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_split_oracle(inst, tour, tm, true).completion);
  }
}
BENCHMARK(BM_SplitOracleRestricted)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_HeldKarp(benchmark::State& state) {
  const Instance inst = make_uniform_instance(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(tsp_baseline(inst, TspMode::exact_dp).duration);
}
BENCHMARK(BM_HeldKarp)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
