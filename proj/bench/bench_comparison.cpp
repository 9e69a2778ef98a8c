#include <benchmark/benchmark.h>

#include <string>

#include "airnet/report.hpp"

using namespace airnet;

namespace {

const std::vector<Strategy> kAll{Strategy::NR, Strategy::WM, Strategy::PNR, Strategy::PWM};

struct Inputs {
  Network net = load_network(std::string(AIRNET_DATA_DIR) + "/dwelling.json");
  std::vector<WeatherRecord> weather = load_weather(std::string(AIRNET_DATA_DIR) + "/synthetic_10day.csv");
};

const Inputs& inputs() {
  static const Inputs in;
  return in;
}

void BM_ComparisonSerial(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(run_comparison_serial(in.net, in.weather, kAll, SolverConfig{}));
}

void BM_ComparisonParallel(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(run_comparison(in.net, in.weather, kAll, SolverConfig{}));
}

void BM_Simulate(benchmark::State& state) {
  const auto& in = inputs();
  const auto strategy = kAll[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(to_string(strategy)));
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(in.net, in.weather, strategy, SolverConfig{}));
}

}  // namespace

BENCHMARK(BM_ComparisonSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComparisonParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Simulate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
