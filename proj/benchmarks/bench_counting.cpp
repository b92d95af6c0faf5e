#include "benchmark/benchmark.h"

#include "vinolab/counting.hpp"
#include "vinolab/extraction.hpp"
#include "vinolab/sumsets.hpp"

namespace {

using namespace vinolab;

GroundSet interval(long n) {
  std::vector<Int> raw;
  for (long v = 1; v <= n; ++v) raw.emplace_back(v);
  return make_ground_set(std::move(raw));
}

void BM_RepTable(benchmark::State& state) {
  GroundSet a = interval(state.range(0));
  for (auto _ : state) {
    RepTable t = rep_table(a, 2, 3);
    benchmark::DoNotOptimize(t.support_size());
  }
}
BENCHMARK(BM_RepTable)->Arg(16)->Arg(32)->Arg(48);

void BM_VinogradovNaive(benchmark::State& state) {
  GroundSet a = interval(state.range(0));
  for (auto _ : state) {
    Int j = vinogradov_count_naive(a, 2, 2);
    benchmark::DoNotOptimize(j.get_d());
  }
}
BENCHMARK(BM_VinogradovNaive)->Arg(6)->Arg(8)->Arg(10);

void BM_MomentSumset(benchmark::State& state) {
  MomentEmbedding e = moment_embed(interval(16), 2);
  for (auto _ : state) {
    VectorSet v = moment_sumset(e, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(v.size());
  }
}
BENCHMARK(BM_MomentSumset)->Arg(2)->Arg(4)->Arg(6);

void BM_AdditiveEnergy(benchmark::State& state) {
  GroundSet a = interval(state.range(0));
  VectorSet v = VectorSet::from_integers(a.elements());
  for (auto _ : state) {
    Int e = additive_energy(v.members(), v.members());
    benchmark::DoNotOptimize(e.get_d());
  }
}
BENCHMARK(BM_AdditiveEnergy)->Arg(64)->Arg(128)->Arg(256);

void BM_Pipeline(benchmark::State& state) {
  GroundSet a = interval(state.range(0));
  PipelineParams params;
  params.s = 6;
  params.k = 2;
  params.epsilon = Rat(1, 10);
  params.delta = Rat(1, 100);
  params.l_list = {2};
  for (auto _ : state) {
    ExtractionTrace trace = run_pipeline(a, params);
    benchmark::DoNotOptimize(trace.records.size());
  }
}
BENCHMARK(BM_Pipeline)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
