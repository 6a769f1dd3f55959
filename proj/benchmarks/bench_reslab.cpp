#include <benchmark/benchmark.h>

#include <cmath>

#include "reslab/evolution.hpp"
#include "reslab/hermite_basis.hpp"
#include "reslab/oscillatory.hpp"
#include "reslab/resonance_enum.hpp"
#include "reslab/spectral_transform.hpp"

using namespace reslab;

static void BM_Enumerate(benchmark::State& st) {
  const int mm = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(enumerate(mm));
  st.SetComplexityN(mm);
}
BENCHMARK(BM_Enumerate)->RangeMultiplier(2)->Range(64, 4096)->Complexity(benchmark::oNSquared);

static void BM_TripleTable(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(TripleProductTable(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_TripleTable)->Arg(8)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_TransformForward(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const FourierHermiteTransform T(Grid(n, 80.0), std::make_shared<HermiteBasis>(7));
  PhysicalField f(n, static_cast<int>(T.basis().node_count()));
  for (int j = 0; j < f.n_x1; ++j)
    for (int i = 0; i < f.n_x2; ++i) {
      const double x = T.grid().x(j), y = T.basis().nodes()[static_cast<std::size_t>(i)];
      f(j, i) = std::exp(-0.1 * x * x - 0.5 * y * y);
    }
  for (auto _ : st) benchmark::DoNotOptimize(T.forward(f));
}
BENCHMARK(BM_TransformForward)->Arg(128)->Arg(512);

static void BM_FresnelQuadrature(benchmark::State& st) {
  OscIntegralSpec s;
  s.psi = [](double x) { return x * x; };
  s.dpsi = [](double x) { return 2.0 * x; };
  s.amplitude = [](double x) { return cplx(std::exp(-x * x)); };
  s.cutoff = {0.0, 8.0, CutoffShape::Indicator};
  s.t = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(quadrature_oscillatory(s));
}
BENCHMARK(BM_FresnelQuadrature)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

// default desk grid: 128 x1 points, 8 modes
static void BM_FullStep(benchmark::State& st) {
  const SimConfig c;
  const Grid g(c.n_x1, c.length_x1);
  const FullSolver fs(g, c.P);
  auto s = init_profile(c);
  for (auto _ : st) fs.step(s, c.dt);
}
BENCHMARK(BM_FullStep)->Unit(benchmark::kMicrosecond);

static void BM_ResonantStep(benchmark::State& st) {
  SimConfig c;
  c.init_modes = {0, 1, 3};
  const Grid g(c.n_x1, c.length_x1);
  const ResonantSystem rs(g, c.P, c.gate);
  auto s = init_profile(c);
  s.time = 1.0;
  for (auto _ : st) rs.step(s, c.dt);
  st.counters["interactions"] = static_cast<double>(rs.interaction_count());
}
BENCHMARK(BM_ResonantStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
