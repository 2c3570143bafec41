#include <benchmark/benchmark.h>

#include "winding_lab/explore.hpp"
#include "winding_lab/faces.hpp"
#include "winding_lab/montecarlo.hpp"

using namespace winding_lab;

static void BM_TraceInterfaces(benchmark::State& state) {
  const int n = int(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const Coloring c = derive_stream(1, 0, rep++);
    benchmark::DoNotOptimize(trace_interfaces(c, Annulus(1, n)).size());
  }
}
BENCHMARK(BM_TraceInterfaces)->RangeMultiplier(4)->Range(16, 256);

static void BM_HasArmEvent(benchmark::State& state) {
  const auto sigma = ColorSequence::parse(state.range(1) ? "BBWW" : "BWBW");
  const int n = int(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const Coloring c = derive_stream(2, 0, rep++);
    benchmark::DoNotOptimize(has_arm_event(c, Annulus(1, n), sigma));
  }
}
BENCHMARK(BM_HasArmEvent)->ArgsProduct({{16, 64}, {0, 1}});

static void BM_CanonicalArm(benchmark::State& state) {
  const int n = int(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const Coloring c = derive_stream(3, 0, rep++);
    try {
      benchmark::DoNotOptimize(balanced_arm(c, Annulus(1, n)).sites.size());
    } catch (const NoCrossingArm&) {
    }
  }
}
BENCHMARK(BM_CanonicalArm)->Arg(32)->Arg(128);

static void BM_ConditionedDraw(benchmark::State& state) {
  const auto spec = ConditionSpec::make(ColorSequence::parse("BWBW"), ConditionMode::four_arm);
  StreamCursor cursor(4, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_conditioned(spec, int(state.range(0)), cursor).theta);
  }
}
BENCHMARK(BM_ConditionedDraw)->DenseRange(4, 6);

static void BM_CrossingCount(benchmark::State& state) {
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const Coloring c = derive_stream(5, 0, rep++);
    benchmark::DoNotOptimize(count_disjoint_black_crossings(c, 4, int(state.range(0))));
  }
}
BENCHMARK(BM_CrossingCount)->Arg(16)->Arg(64);

static void BM_DetectGoodFaces(benchmark::State& state) {
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const Coloring c = derive_stream(6, 0, rep++);
    benchmark::DoNotOptimize(detect_good_faces(c, int(state.range(0))).has_value());
  }
}
BENCHMARK(BM_DetectGoodFaces)->DenseRange(3, 5);
BENCHMARK_MAIN();
