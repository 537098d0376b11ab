#include <benchmark/benchmark.h>

#include <chanres/channel.hpp>
#include <chanres/free_sets.hpp>
#include <chanres/monotones.hpp>
#include <chanres/norms.hpp>
#include <chanres/protocols.hpp>

using namespace chanres;

namespace {

Channel random_channel(int d, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return Channel::random(d, d, rank, rng);
}

void bm_choi_from_kraus(benchmark::State& state) {
  const int d = int(state.range(0));
  Rng rng(1);
  Channel c = Channel::random(d, d, 2, rng);
  std::vector<Matrix> kraus = c.kraus_operators();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Channel::from_kraus(kraus));
  }
}
BENCHMARK(bm_choi_from_kraus)->Arg(2)->Arg(4)->Arg(8);

void bm_channel_apply(benchmark::State& state) {
  const int d = int(state.range(0));
  Channel c = random_channel(d, 2, 2);
  Rng rng(3);
  DensityMatrix rho{rng.random_density(d)};
  for (auto _ : state) benchmark::DoNotOptimize(c.apply(rho));
}
BENCHMARK(bm_channel_apply)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_diamond_distance(benchmark::State& state) {
  const int d = int(state.range(0));
  Channel a = random_channel(d, 2, 4);
  Channel b = random_channel(d, 2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_distance(a, b));
}
BENCHMARK(bm_diamond_distance)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_robustness_mio(benchmark::State& state) {
  const int d = int(state.range(0));
  Channel n = random_channel(d, 2, 6);
  FreeSetSpec spec = FreeSetSpec::mio(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(robustness(n, spec));
}
BENCHMARK(bm_robustness_mio)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void bm_convex_split_shortcut(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(7);
  Matrix sig = rng.random_density(2);
  Matrix tau = 0.5 * rng.random_density(2) + 0.5 * Matrix::Identity(2, 2) / 2;
  tau /= tau.trace().real();
  for (auto _ : state)
    benchmark::DoNotOptimize(mixture_tail_trace_distance(sig, tau, n));
}
BENCHMARK(bm_convex_split_shortcut)->Arg(8)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

void bm_sample_free_mio(benchmark::State& state) {
  FreeSetSpec spec = FreeSetSpec::mio(2, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_free(spec, seed++));
}
BENCHMARK(bm_sample_free_mio);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
