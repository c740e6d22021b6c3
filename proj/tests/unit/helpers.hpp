#pragma once

#include <random>

#include "nchns/grid.hpp"
#include "nchns/nonlocal.hpp"
#include "nchns/physics.hpp"
#include "nchns/error.hpp"
#include "nchns/forward.hpp"
#include "nchns/presets.hpp"

namespace testutil {

using namespace nchns;

inline std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline ScalarField random_scalar(const Grid2D& g, unsigned seed) {
  ScalarField f(g);
  f.values = random_vec(g.ncells(), seed);
  return f;
}

// Random face field with zero boundary-normal faces.
inline VectorField random_vector(const Grid2D& g, unsigned seed) {
  VectorField w(g);
  w.ux = random_vec(g.nxfaces(), seed);
  w.uy = random_vec(g.nyfaces(), seed + 7919);
  w.zero_boundary_normal();
  return w;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double dot(const ScalarField& a, const ScalarField& b) { return dot(a.values, b.values); }
inline double dot(const VectorField& a, const VectorField& b) { return dot(a.ux, b.ux) + dot(a.uy, b.uy); }

// The default physical setting used across tests.
struct Setting {
  Grid2D g;
  PhysicsParams phys;
  Kernel kernel;
  TimeScheme scheme;

  explicit Setting(int n = 16, int nt = 10)
      : g(n, n, 16.0, 16.0),
        kernel(auto_scale_kernel(Kernel::gaussian(g, 1.0, 1.0), phys.potential, phys.constants.c1)) {
    scheme.nt = nt;
    scheme.dt = g.dx() * g.dx() / (8.0 * phys.viscosity.upper);
  }

  ForwardSolver solver() const { return ForwardSolver(g, kernel, phys, scheme); }
  InitialData init() const { return {taylor_vortex(g, 0.5), make_phase_field("bubble(4, 8, 8, 1)", g)}; }
};

}  // namespace testutil
