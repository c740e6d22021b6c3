#include <benchmark/benchmark.h>

#include "nchns/adjoint.hpp"
#include "nchns/control.hpp"
#include "nchns/presets.hpp"
#include "nchns/tangent.hpp"

using namespace nchns;

namespace {

struct Fixture {
  Grid2D g;
  PhysicsParams phys;
  Kernel kernel;
  TimeScheme scheme;
  InitialData init;

  Fixture(int n, int nt)
      : g(n, n, 16.0, 16.0),
        kernel(auto_scale_kernel(Kernel::gaussian(g, 1.0, 1.0), phys.potential, phys.constants.c1)) {
    scheme.nt = nt;
    scheme.dt = g.dx() * g.dx() / (8.0 * phys.viscosity.upper);
    init = {taylor_vortex(g, 0.5), make_phase_field("bubble(4, 8, 8, 1)", g)};
  }
  ForwardSolver solver() const { return ForwardSolver(g, kernel, phys, scheme); }
};

void BM_Convolve(benchmark::State& st) {
  const Grid2D g(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 16.0, 16.0);
  const Kernel k = Kernel::gaussian(g, 1.0, 1.0);
  const ScalarField phi = make_phase_field("random(1, 3)", g);
  for (auto _ : st) benchmark::DoNotOptimize(convolve(k, phi));
}
BENCHMARK(BM_Convolve)->Arg(32)->Arg(64)->Arg(128);

void BM_Project(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)), 1);
  const auto solver = f.solver();
  const VectorField w = smooth_random_forcing(f.g, 1, 1.0, 4)[0];
  for (auto _ : st) benchmark::DoNotOptimize(solver.project(w));
}
BENCHMARK(BM_Project)->Arg(32)->Arg(64)->Arg(128);

// 10 steps per iteration for each sweep.
void BM_Forward(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)), 10);
  const auto solver = f.solver();
  const auto v = smooth_random_control(f.g, 10, 1.0, 7);
  for (auto _ : st) benchmark::DoNotOptimize(solver.run(v, f.init));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Tangent(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)), 10);
  const auto solver = f.solver();
  const auto traj = solver.run(smooth_random_control(f.g, 10, 1.0, 7), f.init);
  const auto h = smooth_random_forcing(f.g, 10, 1.0, 3);
  for (auto _ : st) benchmark::DoNotOptimize(run_tangent(solver, traj, h));
}
BENCHMARK(BM_Tangent)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Adjoint(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)), 10);
  const auto solver = f.solver();
  const auto traj = solver.run(smooth_random_control(f.g, 10, 1.0, 7), f.init);
  const Targets tg = Targets::zeros(f.g, 10);
  const auto scheme = st.range(1) == 0 ? AdjointScheme::discrete : AdjointScheme::continuous;
  for (auto _ : st) benchmark::DoNotOptimize(run_adjoint(solver, traj, tg, CostWeights{}, scheme));
}
BENCHMARK(BM_Adjoint)->Args({32, 0})->Args({32, 1})->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
