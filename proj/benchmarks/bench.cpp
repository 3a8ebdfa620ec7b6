#include <benchmark/benchmark.h>

#include <cmath>

#include "growthlab/cayley.hpp"
#include "growthlab/concat.hpp"
#include "growthlab/hyperbolic.hpp"

using namespace growthlab;

namespace {

const GroupDescriptor F2 = GroupDescriptor::free(2);

void BM_ball(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_ball(F2, r).size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * std::pow(3, r) - 1));
}
BENCHMARK(BM_ball)->DenseRange(6, 11, 1)->Unit(benchmark::kMillisecond);

void BM_ball_product(benchmark::State& state) {
  const auto g = GroupDescriptor::product({2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_ball(g, static_cast<std::size_t>(state.range(0))).size());
}
BENCHMARK(BM_ball_product)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_count_growth(benchmark::State& state) {
  const auto h = SubgroupOracle::stallings(F2, {parse_element(F2, "aa"), parse_element(F2, "bab")});
  for (auto _ : state) benchmark::DoNotOptimize(count_growth(F2, &h, static_cast<std::size_t>(state.range(0))).counts);
}
BENCHMARK(BM_count_growth)->Arg(18)->Arg(36);

void BM_ambiguity(benchmark::State& state) {
  const auto kit = ConnectorKit::build(F2, parse_element(F2, "a"), parse_element(F2, "b"), 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(measure_ambiguity(kit, nullptr, n, n).pairs);
}
BENCHMARK(BM_ambiguity)->DenseRange(3, 5, 1)->Unit(benchmark::kMillisecond);

void BM_delta(benchmark::State& state) {
  const auto m = FiniteMetric::from_elements(enumerate_ball(F2, static_cast<std::size_t>(state.range(0))).elements);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_delta(m).delta);
}
BENCHMARK(BM_delta)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
