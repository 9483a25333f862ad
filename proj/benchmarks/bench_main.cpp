#include <benchmark/benchmark.h>

#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/lifetime.hpp"
#include "qfcsim/emitter/emitter.hpp"
#include "qfcsim/qfc/conversion.hpp"

using namespace qfcsim;

namespace {

emitter::EmitterConfig blinking(std::uint64_t pulses, double p) {
  emitter::EmitterConfig c;
  c.n_pulses = pulses;
  c.p_detect_per_pulse = p;
  c.beta = 0.662;
  c.background_rate_cps = 22;
  return c;
}

void BM_SimulateEmission(benchmark::State& state) {
  const auto c = blinking(static_cast<std::uint64_t>(state.range(0)), 9.33e-4);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(emitter::simulate_emission(c, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetLabel("pulses");
}
BENCHMARK(BM_SimulateEmission)->Arg(1 << 20)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_ConvertStream(benchmark::State& state) {
  const auto c = blinking(10'000'000, 0.01);
  const auto tags = emitter::simulate_emission(c, 1);
  qfc::ConversionConfig conv;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfc::convert_stream(tags, conv, c.n_pulses * 1'000'000, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tags.size()));
}
BENCHMARK(BM_ConvertStream)->Unit(benchmark::kMillisecond);

void BM_G2Pulsed(benchmark::State& state) {
  const auto c = blinking(static_cast<std::uint64_t>(state.range(0)), 0.01);
  const auto tags = emitter::simulate_emission(c, 2);
  const auto [a, b] = emitter::split_50_50(tags, {2, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::g2_pulsed(a, b, c.rep_rate_hz, 60));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tags.size()));
}
BENCHMARK(BM_G2Pulsed)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_HistogramVsPulse(benchmark::State& state) {
  const auto tags = emitter::simulate_emission(blinking(10'000'000, 0.01), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::histogram_vs_pulse(tags, 1e6, 100, 100'000, 10.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tags.size()));
}
BENCHMARK(BM_HistogramVsPulse)->Unit(benchmark::kMillisecond);

void BM_FitExponential(benchmark::State& state) {
  const auto tags = emitter::simulate_emission(blinking(10'000'000, 9.33e-4), 4);
  const auto hist = analysis::histogram_vs_pulse(tags, 1e6, 100, 100'000, 10.0);
  analysis::ExponentialFitOptions opts;
  opts.fit_start_ps = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::fit_exponential(hist, opts));
  }
}
BENCHMARK(BM_FitExponential)->Unit(benchmark::kMillisecond);

void BM_FitBunching(benchmark::State& state) {
  const auto tags = emitter::simulate_emission(blinking(10'000'000, 0.01), 5);
  const auto [a, b] = emitter::split_50_50(tags, {5, 0});
  const auto h = analysis::g2_pulsed(a, b, 1e6, 60);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::fit_bunching(h));
  }
}
BENCHMARK(BM_FitBunching)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
