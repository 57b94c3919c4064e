#include <benchmark/benchmark.h>

#include <cstdint>

#include "ccsc/acquisition.hpp"
#include "ccsc/channel.hpp"
#include "ccsc/dpa.hpp"
#include "ccsc/reconstruct.hpp"
#include "ccsc/trace_io.hpp"
#include "ccsc/transient.hpp"
#include "ccsc/victim.hpp"

namespace {

ccsc::VictimParams sized_params(std::int64_t length) {
  ccsc::VictimParams p;
  p.trace_length = static_cast<std::size_t>(length);
  return p;
}

void BM_synthesize_trace(benchmark::State& state) {
  const auto p = sized_params(state.range(0));
  std::uint8_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::synthesize_trace(x++, 0x2A, p, 1));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_synthesize_trace)->Arg(1024)->Arg(4096);

void BM_generate_trace_set(benchmark::State& state) {
  const auto p = sized_params(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::generate_trace_set(0x2A, p, 1));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_generate_trace_set)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_transient_solve_plate(benchmark::State& state) {
  const auto net = ccsc::build_capacitive_channel(ccsc::ProbeGeometry{}, 50.0);
  const auto p = sized_params(1024);
  const auto exc = ccsc::synthesize_trace(0xFF, 0x2A, p, 1);
  const double dt = p.sample_period / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::transient_solve(net, exc, dt));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_transient_solve_plate)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_transient_solve_line(benchmark::State& state) {
  const auto net =
      ccsc::build_inductive_capacitive_channel(ccsc::ProbeGeometry{}, 50.0, 0.3);
  const auto p = sized_params(1024);
  const auto exc = ccsc::synthesize_trace(0xFF, 0x2A, p, 1);
  const double dt = p.sample_period / 32.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::transient_solve(net, exc, dt));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_transient_solve_line)->Unit(benchmark::kMillisecond);

void BM_digitize(benchmark::State& state) {
  const auto p = sized_params(1024);
  const auto t = ccsc::synthesize_trace(0xFF, 0x2A, p, 1);
  ccsc::AdcConfig a;
  a.resolution_bits = 10;
  a.full_scale = 1e-4;
  a.sample_period = t.sample_period;
  a.input_noise_sigma = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::digitize(t, a, 7));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_digitize);

void BM_cumulative_integrate(benchmark::State& state) {
  const auto p = sized_params(4096);
  const auto t = ccsc::synthesize_trace(0xFF, 0x2A, p, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::cumulative_integrate(t));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_cumulative_integrate);

void BM_attack(benchmark::State& state) {
  const auto p = sized_params(state.range(0));
  const auto ts = ccsc::generate_trace_set(0x2A, p, 1);
  const ccsc::LeakageModel model;
  const auto kind = state.range(1) == 0
                        ? ccsc::DistinguisherKind::difference_of_means
                        : ccsc::DistinguisherKind::pearson_correlation;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::attack(ts, kind, model));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_attack)
    ->Args({1024, 0})
    ->Args({1024, 1})
    ->Args({256, 1})
    ->Unit(benchmark::kMillisecond);

void BM_trace_file_round_trip(benchmark::State& state) {
  const auto p = sized_params(1024);
  const auto ts = ccsc::generate_trace_set(0x2A, p, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccsc::decode_trace_set(ccsc::encode_trace_set(ts)));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_trace_file_round_trip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
