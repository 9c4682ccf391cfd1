// Serial reference vs OpenMP kernels. Arg(0) is the serial path; Arg(w)
// runs the parallel kernel with w workers.

#include <benchmark/benchmark.h>

#include "lyap/kernels.hpp"
#include "lyap/structure.hpp"

namespace {

lyap::ChainConfig gaussian_chain(int n, std::int64_t N) {
  lyap::ChainConfig c;
  c.ensemble = lyap::EnsembleSpec::gaussian(n);
  c.N = N;
  c.rng = {1, 0};
  return c;
}

void trials(benchmark::State& state, lyap::EstimatorKind kind) {
  const auto cfg = gaussian_chain(20, 200);
  const int workers = static_cast<int>(state.range(0));
  const std::int64_t count = 256;
  for (auto _ : state) {
    auto out = workers == 0 ? lyap::kernels::trial_statistics_serial(cfg, kind, count)
                            : lyap::kernels::trial_statistics(cfg, kind, count, workers);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

void BM_TopTrials(benchmark::State& s) { trials(s, lyap::EstimatorKind::Top); }
void BM_LeastTrials(benchmark::State& s) { trials(s, lyap::EstimatorKind::Least); }

void BM_SmallBall(benchmark::State& state) {
  const int n = 10;
  const auto spec = lyap::EnsembleSpec::rademacher(n);
  const lyap::Vector x = lyap::Vector::Ones(n) / std::sqrt(double(n));
  const auto centres = lyap::small_ball_centres();
  const int workers = static_cast<int>(state.range(0));
  const std::int64_t count = 100000;
  for (auto _ : state) {
    auto c = workers == 0
                 ? lyap::kernels::small_ball_counts_serial(x, 0.1, spec, centres, count, {1, 0})
                 : lyap::kernels::small_ball_counts(x, 0.1, spec, centres, count, {1, 0}, workers);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

}  // namespace

BENCHMARK(BM_TopTrials)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeastTrials)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmallBall)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
