#include <benchmark/benchmark.h>

#include "mcfs/flow.hpp"
#include "mcfs/inscribed.hpp"
#include "mcfs/poincare.hpp"
#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"

using namespace mcfs;

static void BM_ProfileCurvatures(benchmark::State& state) {
  ProfileCurve p = make_dumbbell_profile(0.3, 0.95, state.range(0), 1.0);
  for (auto _ : state) {
    auto g = profile_curvatures(p, 4);
    benchmark::DoNotOptimize(g);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProfileCurvatures)->Range(128, 2048)->Complexity();

static void BM_McfStep(benchmark::State& state) {
  FlowState st;
  st.profile = make_dumbbell_profile(0.3, 0.95, state.range(0), 1.0);
  StepControl ctrl;
  const double dt = cfl_dt(st, 4, ctrl);
  for (auto _ : state) {
    mcf_step(st, 4, dt);
    benchmark::DoNotOptimize(st.t);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_McfStep)->Range(128, 1024)->Complexity();

static void BM_InscribedExscribed(benchmark::State& state) {
  ProfileCurve p = make_dumbbell_profile(0.3, 0.95, state.range(0), 1.0);
  ProfileGeometry g = profile_curvatures(p, 4);
  for (auto _ : state) {
    auto r = inscribed_exscribed(p, 4, g);
    benchmark::DoNotOptimize(r);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InscribedExscribed)->Range(128, 1024)->Complexity();

static void BM_GammaSearch(benchmark::State& state) {
  for (auto _ : state) {
    auto r = poincare_gamma_search(4, 0.5, 0.05, state.range(0), 1);
    benchmark::DoNotOptimize(r.gamma_hat);
  }
}
BENCHMARK(BM_GammaSearch)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
