#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "ddfabc/abc/ddf_boundary.hpp"
#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/forest/forest.hpp"
#include "ddfabc/forest/loss.hpp"
#include "ddfabc/pml/cpml.hpp"
#include "ddfabc/rng.hpp"
#include "ddfabc/scene.hpp"

using namespace ddfabc;

namespace {

forest::Forest random_forest(int k, int d, int m) {
  forest::Forest f({k, d, m});
  Rng rng(1);
  for (auto& v : f.parameters()) v = uniform(rng, -0.5, 0.5);
  return f;
}

// Grids step in place, so the source is switched off to keep values bounded.
void run_steps(benchmark::State& state, fdtd::BoundaryHandler& boundary, int pad) {
  const auto l = layout(Scene{}, pad);
  fdtd::Simulation sim(l.grid, l.source, l.pec_mask(), boundary);
  for (int n = 0; n < 200; ++n) sim.step();
  sim.set_source_enabled(false);
  for (auto _ : state) sim.step();
  state.counters["cells/s"] =
      benchmark::Counter(static_cast<double>(l.grid.nx) * l.grid.ny, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_StepPec(benchmark::State& state) {
  fdtd::PecBoundary b;
  run_steps(state, b, 1);
}
BENCHMARK(BM_StepPec);

void BM_StepCpml(benchmark::State& state) {
  pml::CpmlBoundary b(pml::PmlParams{});
  run_steps(state, b, 10);
}
BENCHMARK(BM_StepCpml);

void BM_StepDdf(benchmark::State& state) {
  const dataset::StencilSpec st;
  const auto f = random_forest(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), st.feature_count());
  abc::ForestRingModel model(f, f, st, {true, true});
  abc::DdfBoundary b(model, st, 1.0);
  run_steps(state, b, 1);
}
BENCHMARK(BM_StepDdf)->Args({16, 4})->Args({32, 6});

void BM_ForestPredict(benchmark::State& state) {
  const int m = 54;
  const auto f = random_forest(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), m);
  forest::Predictor p(f);
  std::vector<double> x(m);
  std::iota(x.begin(), x.end(), -27.0);
  for (auto _ : state) benchmark::DoNotOptimize(p(x));
}
BENCHMARK(BM_ForestPredict)->Args({16, 4})->Args({32, 6});

void BM_Backward(benchmark::State& state) {
  const int m = 54, rows = 256;
  const auto f = random_forest(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), m);
  Rng rng(2);
  std::vector<double> x(static_cast<std::size_t>(rows) * m), y(rows);
  for (auto& v : x) v = uniform(rng, -1.0, 1.0);
  for (auto& v : y) v = uniform(rng, -1.0, 1.0);
  std::vector<std::size_t> batch(rows);
  std::iota(batch.begin(), batch.end(), 0);
  std::vector<double> grad(f.parameters().size());
  const forest::DataView data{x, y, m};
  for (auto _ : state) benchmark::DoNotOptimize(forest::backward(f, data, batch, {}, grad));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_Backward)->Args({16, 4})->Args({32, 6});

}  // namespace

// libbenchmark_main.a ships as LTO bytecode tied to one compiler build; the
// shared library plus our own main avoids it.
BENCHMARK_MAIN();
