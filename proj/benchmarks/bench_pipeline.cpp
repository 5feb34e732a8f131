#include <benchmark/benchmark.h>

#include <cmath>

#include "nlsprop/roots.hpp"
#include "nlsprop/verdict.hpp"

using namespace nlsprop;

namespace {

const SolitonData& cubic() {
  static const SolitonData s = solve_soliton(family_spec(ProblemFamily::Nls3d, 1.0));
  return s;
}

const Eigenpair& cubic_pair() {
  static const Eigenpair e =
      solve_unstable_eigenpair(family_spec(ProblemFamily::Nls3d, 1.0), cubic());
  return e;
}

ProblemSpec spec_for(int which) {
  switch (which) {
    case 0: return family_spec(ProblemFamily::Nls3d, 1.0);
    case 1: return family_spec(ProblemFamily::Cqnls, 0.01);
    default: return family_spec(ProblemFamily::Nls1d, 3.0);
  }
}

}  // namespace

static void BM_Soliton(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_soliton(spec));
  state.SetLabel(spec.label());
}
BENCHMARK(BM_Soliton)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_SolitonWarmStart(benchmark::State& state) {
  SolitonOptions opt;
  opt.guess = cubic().state();
  const auto spec = family_spec(ProblemFamily::Nls3d, 1.01);
  for (auto _ : state) benchmark::DoNotOptimize(solve_soliton(spec, opt));
}
BENCHMARK(BM_SolitonWarmStart)->Unit(benchmark::kMillisecond);

static void BM_Eigenpair(benchmark::State& state) {
  const auto spec = family_spec(ProblemFamily::Nls3d, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_unstable_eigenpair(spec, cubic()));
}
BENCHMARK(BM_Eigenpair)->Unit(benchmark::kMillisecond);

static void BM_IndexFunction(benchmark::State& state) {
  const auto spec = family_spec(ProblemFamily::Nls3d, 1.0);
  const auto op = make_operator(spec, cubic(), Sign::Plus, Family::DistortedL,
                                Sector::harmonic(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(index_of_sector(op, {}, false));
}
BENCHMARK(BM_IndexFunction)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_GramMatrix(benchmark::State& state) {
  const auto spec = family_spec(ProblemFamily::Nls3d, 1.0);
  const auto op = make_operator(spec, cubic(), Sign::Plus, Family::DistortedL, Sector::harmonic(0));
  const auto rhs = sector_rhs_set(spec, cubic(), cubic_pair(), Sign::Plus, Sector::harmonic(0));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(op, rhs));
}
BENCHMARK(BM_GramMatrix)->Unit(benchmark::kMillisecond);

static void BM_Pipeline(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(spec));
  state.SetLabel(spec.label());
}
BENCHMARK(BM_Pipeline)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_Threshold1D(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(find_threshold(ProblemFamily::Nls1d, "K1_o", 6.0, 6.2, 1e-10));
}
BENCHMARK(BM_Threshold1D)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_Brent(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(brent_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14));
}
BENCHMARK(BM_Brent);

BENCHMARK_MAIN();
