#include <benchmark/benchmark.h>

#include "symdyn/models.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/tower.hpp"

using namespace symdyn;

namespace {

const Alphabet a2 = Alphabet::digits(2);

Word parse(const char* s) { return a2.parse(s); }

void BM_Enumerate(benchmark::State& state) {
  auto o = sft_from_forbidden({a2, {parse("111")}});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(o->enumerate(n));
  state.SetLabel("forbid 111");
}
BENCHMARK(BM_Enumerate)->DenseRange(12, 20, 4);

void BM_PressureLanguage(benchmark::State& state) {
  auto L = WordSet::language(sft_from_forbidden({a2, {parse("11")}}));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pressure_estimate(L, Potential::zero(2), n));
}
BENCHMARK(BM_PressureLanguage)->Arg(20)->Arg(30);

void BM_PressureFiltered(benchmark::State& state) {
  auto X = cycle_sft(8);
  auto avoid = [](WordView w) { return !contains_factor(w, Word{0}); };
  auto E = WordSet::filter(X, avoid, "avoid 1", avoid);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pressure_estimate(E, Potential::zero(8), n));
}
BENCHMARK(BM_PressureFiltered)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_LoopSums(benchmark::State& state) {
  auto tower = build_tower({parse("0"), parse("01"), parse("10")}, 20, parse("0"));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(loop_sums(tower, Potential::zero(2), n));
}
BENCHMARK(BM_LoopSums)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
