// Serial reference vs OpenMP kernels on a synthetic population. Run with
// OMP_NUM_THREADS set to compare scaling; the serial rows ignore it.
#include "airsig/batch.hpp"
#include "airsig/dtw.hpp"
#include "airsig/signal.hpp"
#include "airsig/synth.hpp"

#include <benchmark/benchmark.h>

using namespace airsig;

namespace {

const std::vector<SignatureSample>& raw_population() {
  static const std::vector<SignatureSample> raw = [] {
    PopulationSpec spec;
    spec.users = 8;
    return batch::generate_population(spec, batch::Execution::Serial);
  }();
  return raw;
}

const std::vector<SignatureSample>& processed_population() {
  static const std::vector<SignatureSample> processed =
      batch::preprocess_all(raw_population(), {}, batch::Execution::Serial);
  return processed;
}

std::vector<batch::IndexPair> all_pairs(std::size_t n) {
  std::vector<batch::IndexPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

batch::Execution execution_of(const benchmark::State& state) {
  return state.range(0) == 0 ? batch::Execution::Serial : batch::Execution::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(batch::thread_count()));
}

void BM_ScorePairs(benchmark::State& state) {
  const auto& data = processed_population();
  const auto pairs = all_pairs(data.size());
  const SensorSet sensors{SensorKind::Accelerometer, SensorKind::Gyroscope};
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch::score_pairs(data, pairs, sensors, {}, kEqualWeights, execution_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
  label(state);
}
BENCHMARK(BM_ScorePairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PreprocessAll(benchmark::State& state) {
  const auto& raw = raw_population();
  for (auto _ : state) benchmark::DoNotOptimize(batch::preprocess_all(raw, {}, execution_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(raw.size()));
  label(state);
}
BENCHMARK(BM_PreprocessAll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GeneratePopulation(benchmark::State& state) {
  PopulationSpec spec;
  spec.users = 4;
  for (auto _ : state) benchmark::DoNotOptimize(batch::generate_population(spec, execution_of(state)));
  label(state);
}
BENCHMARK(BM_GeneratePopulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// One full-matrix DTW on a typical pair, for scale.
void BM_DtwCost(benchmark::State& state) {
  const auto& data = processed_population();
  const Series3& a = data[0].trace(SensorKind::Accelerometer).samples();
  const Series3& b = data[1].trace(SensorKind::Accelerometer).samples();
  for (auto _ : state) benchmark::DoNotOptimize(dtw_cost(a, b));
  state.counters["cells"] = static_cast<double>(a.rows() * b.rows());
}
BENCHMARK(BM_DtwCost)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
