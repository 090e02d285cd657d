#include <benchmark/benchmark.h>

#include <cmath>

#include "expsum/exp_sum.hpp"
#include "expsum/irr.hpp"
#include "expsum/roots.hpp"
#include "expsum/sync.hpp"

namespace {

using namespace expsum;

const ExpSum& composite() {
  static const ExpSum sum{
      {2.5, 0.9}, {1.2, 0.8}, {0.4, 0.6}, {0.35, 0.5}, {-2, 0.1}};
  return sum;
}

void bm_evaluate(benchmark::State& state) {
  const ExpSum& sum = composite();
  double k = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(sum, k));
    k = k < 30.0 ? k + 0.1 : 0.0;
  }
}
BENCHMARK(bm_evaluate);

void bm_derivative(benchmark::State& state) {
  const ExpSum& sum = composite();
  for (auto _ : state) {
    benchmark::DoNotOptimize(derivative(sum, 3));
  }
}
BENCHMARK(bm_derivative);

void bm_find_roots(benchmark::State& state) {
  const ExpSum& sum = composite();
  const Window window = default_window(sum);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_roots(sum, window));
  }
}
BENCHMARK(bm_find_roots);

void bm_sync_at_point(benchmark::State& state) {
  const ExpSum table{{8, 0.9}, {-6, 0.8}, {-4, 0.6}, {-3, 0.5}};
  const PairDecomposition decomposition = pair_up_proportional(table);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sync_at_point(decomposition.pairs,
                                           PointKind::zero(), 5.0,
                                           AdjustSide::pi));
  }
}
BENCHMARK(bm_sync_at_point);

void bm_split_shared_mi(benchmark::State& state) {
  const std::vector<ExpTerm> pi_terms{
      {2.5, 0.9}, {1.2, 0.8}, {0.4, 0.6}, {0.35, 0.5}};
  const ExpTerm mi_term{-2.0, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        split_shared_mi(pi_terms, mi_term, PointKind::inflection()));
  }
}
BENCHMARK(bm_split_shared_mi);

void bm_irr_solve(benchmark::State& state) {
  const CashFlowSchedule schedule(
      1.0, 2.0, 0.9, {{-3, 0.8}, {-4, 0.6}, {-3, 0.5}, {11, 0.001}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(irr_solve(schedule));
  }
}
BENCHMARK(bm_irr_solve);

}  // namespace

BENCHMARK_MAIN();
