#include <benchmark/benchmark.h>

#include "sbic/laplace.hpp"

namespace {

sbic::RootedTree quartet() {
  return sbic::RootedTree::build("a", {"1", "2", "3", "4"},
                                 {{"a", "1"}, {"a", "2"}, {"a", "b"}, {"b", "3"}, {"b", "4"}});
}

sbic::ThetaPoint<sbic::Rational> generic(const sbic::RootedTree& t) {
  sbic::ThetaPoint<sbic::Rational> th;
  th.root_p1 = sbic::ratio(2, 5);
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    th.p1_given0.push_back(sbic::ratio(1 + static_cast<long>(e), 10));
    th.p1_given1.push_back(sbic::ratio(9 - static_cast<long>(e), 10));
  }
  return th;
}

void run(benchmark::State& state, bool parallel, sbic::Estimator estimator) {
  const auto t = quartet();
  const auto data = sbic::make_fiber_data(t, generic(t), 1 << 15);
  const sbic::TreeObjective obj(t, data.proportions_double());
  sbic::ValidationConfig cfg;
  cfg.grid = sbic::parse_grid("128:32768:2");
  cfg.samples = static_cast<std::size_t>(state.range(0));
  cfg.estimator = estimator;
  cfg.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(sbic::mc_laplace(obj, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AnnealedSerial(benchmark::State& s) { run(s, false, sbic::Estimator::Annealed); }
void BM_AnnealedParallel(benchmark::State& s) { run(s, true, sbic::Estimator::Annealed); }
void BM_PriorSerial(benchmark::State& s) { run(s, false, sbic::Estimator::PriorSampling); }
void BM_PriorParallel(benchmark::State& s) { run(s, true, sbic::Estimator::PriorSampling); }

}  // namespace

BENCHMARK(BM_AnnealedSerial)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AnnealedParallel)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PriorSerial)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PriorParallel)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
