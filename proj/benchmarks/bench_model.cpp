#include <benchmark/benchmark.h>

#include "qkdcoex/calibration.hpp"
#include "qkdcoex/montecarlo.hpp"
#include "qkdcoex/qkd_rate.hpp"
#include "qkdcoex/sweep.hpp"

namespace {

using namespace qkdcoex;

LinkScenario fitted_scenario() {
  LinkScenario s = default_scenario(FilterKind::ghz100, 2);
  for (auto& e : s.raman.entries) e.rho = 2.4e-9;
  s.e_det = 0.041;
  return s;
}

void BM_SecureRatePoint(benchmark::State& state) {
  LinkScenario s = fitted_scenario();
  double l = 10.0;
  for (auto _ : state) {
    s.span.length_km = l;
    benchmark::DoNotOptimize(secure_rate(s).secure_bps);
    l = l < 100.0 ? l + 1.0 : 10.0;  // defeat caching across iterations
  }
}
BENCHMARK(BM_SecureRatePoint);

void BM_DistanceSweep23Points(benchmark::State& state) {
  LinkScenario s = fitted_scenario();
  const SweepSpec spec{SweepAxis::distance_km, 0.0, 110.0, 5.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_distance(s, spec).rows.size());
  }
}
BENCHMARK(BM_DistanceSweep23Points);

void BM_MonteCarloGates(benchmark::State& state) {
  LinkScenario s = fitted_scenario();
  const auto gates = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(s, TrialConfig{gates, ++seed}).mu.clicks);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(gates) * state.iterations());
}
BENCHMARK(BM_MonteCarloGates)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_CalibrateTwoParams(benchmark::State& state) {
  LinkScenario base = default_scenario();
  const std::vector<CalibrationAnchor> anchors = {
      {35.5, FilterKind::ghz100, 200.0, 1.9e6},
      {50.5, FilterKind::ghz100, 200.0, 1.2e6},
      {101.0, FilterKind::ghz25, 200.0, 1.0e4},
      {50.0, FilterKind::ghz25, 10000.0, 1.39e5},
      {50.0, FilterKind::ghz100, 1000.0, 1.0e6},
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_raman(base, anchors).e_det);
  }
}
BENCHMARK(BM_CalibrateTwoParams)->Unit(benchmark::kMillisecond);

}  // namespace
