#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "abbm/engine.hpp"
#include "abbm/estimators.hpp"
#include "abbm/functionals.hpp"
#include "abbm/gumbel.hpp"
#include "abbm/oracles.hpp"
#include "abbm/point_process.hpp"

using namespace abbm;

namespace {

const double kLam = std::sqrt(2.0);

SimulationOptions options(double horizon, double dt) {
  SimulationOptions o;
  o.checkpoints = uniform_checkpoints(horizon, dt);
  return o;
}

}  // namespace

static void BM_ReplicaKill(benchmark::State& state) {
  const auto params = ModelParams::make(1.0, 0.0, 1.0, Frame::DriftedAbsorbedAtZero);
  const auto opts = options(static_cast<double>(state.range(0)), 0.5);
  std::uint64_t i = 0;
  std::size_t created = 0;
  for (auto _ : state) {
    auto rec = simulate_replica(params, opts, {1, i++});
    created += rec.created_counts.empty() ? 0 : rec.created_counts.back();
    benchmark::DoNotOptimize(rec);
  }
  state.counters["particles"] = benchmark::Counter(static_cast<double>(created), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ReplicaKill)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_ReplicaTagUpperLine(benchmark::State& state) {
  const auto params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  auto opts = options(8.0, 1.0);
  opts.barrier_mode = BarrierMode::Tag;
  opts.upper_line = 2.0;
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_replica(params, opts, {2, i++}));
}
BENCHMARK(BM_ReplicaTagUpperLine)->Unit(benchmark::kMillisecond);

static void BM_EvaluateCheckpoint(benchmark::State& state) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  auto opts = options(static_cast<double>(state.range(0)), static_cast<double>(state.range(0)));
  opts.keep_snapshots = true;
  opts.upper_line = 2.0;
  const auto rec = simulate_replica(params, opts, {3, 0});
  const auto& snap = rec.snapshots.back();
  FunctionalRequest req;
  req.upper_line = 2.0;
  req.test_functions = canonical_test_functions();
  req.truncation_times = {1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_checkpoint(snap, req));
  state.counters["alive"] = static_cast<double>(snap.alive_count());
}
BENCHMARK(BM_EvaluateCheckpoint)->Arg(6)->Arg(10);

static void BM_WaveSolve(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_travelling_wave(rho, OffspringLaw::dyadic()));
}
BENCHMARK(BM_WaveSolve)->Arg(-5)->Arg(0)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_GumbelFit(benchmark::State& state) {
  RandomStream rng(4, 0);
  std::vector<MaxSample> samples;
  for (int i = 0; i < state.range(0); ++i) {
    const double z = rng.exponential(1.0) + 0.05;
    samples.push_back({sample_gumbel_given_z(0.5, z, kLam, rng), z});
  }
  for (auto _ : state) benchmark::DoNotOptimize(gumbel_mixture_fit(samples, kLam));
}
BENCHMARK(BM_GumbelFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_DecoratedDppp(benchmark::State& state) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  const auto pool = sample_decorations(params, 4.0, 50, 1'000'000, 5).samples;
  const auto sampler = pool_sampler(pool);
  RandomStream rng(6, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_dppp(0.5, 1.0, -2.0, kLam, sampler, rng));
}
BENCHMARK(BM_DecoratedDppp);

static void BM_DecorationConstant(benchmark::State& state) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  const auto pool = sample_decorations(params, 4.0, 100, 1'000'000, 7).samples;
  const auto phi = canonical_test_function("tent");
  for (auto _ : state) benchmark::DoNotOptimize(decoration_constant(0.5, kLam, phi, pool));
}
BENCHMARK(BM_DecorationConstant)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
