#include <benchmark/benchmark.h>

#include "repvote/sim.hpp"
#include "repvote/space.hpp"

namespace {

repvote::Election random_election(std::size_t parties, std::size_t voters, std::uint64_t seed) {
  return repvote::sample_ballots(repvote::make_scenario(parties, voters, 1.424, seed)).election;
}

void BM_VerticesParallel(benchmark::State& state) {
  const auto e = random_election(static_cast<std::size_t>(state.range(0)), 2000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(repvote::enumerate_vertices(e));
}

void BM_VerticesSerial(benchmark::State& state) {
  const auto e = random_election(static_cast<std::size_t>(state.range(0)), 2000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(repvote::enumerate_vertices_serial(e));
}

repvote::ExperimentConfig bench_config() {
  repvote::ExperimentConfig c;
  c.n_parties = 20;
  c.n_voters = 5000;
  c.n_runs = 8;
  return c;
}

void BM_ExperimentParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(repvote::run_experiment(bench_config()));
}

void BM_ExperimentSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(repvote::run_experiment_serial(bench_config()));
}

}  // namespace

BENCHMARK(BM_VerticesParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerticesSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
