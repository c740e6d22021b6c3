#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nchns/control.hpp"
#include "nchns/operators.hpp"

using namespace nchns;

namespace {

// Independent quadrature: explicit loops over faces with interior weight
// dx*dy and boundary weight dx*dy/2, right-endpoint rule in time.
double face_sq(const VectorField& a) {
  const Grid2D& g = a.grid;
  const double w = g.cell_volume();
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) s += (i == 0 || i == g.nx ? 0.5 : 1.0) * w * a.x(i, j) * a.x(i, j);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s += (j == 0 || j == g.ny ? 0.5 : 1.0) * w * a.y(i, j) * a.y(i, j);
  return s;
}
double cell_sq(const ScalarField& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return s * a.grid.cell_volume();
}

double oracle_cost(const StateTrajectory& t, const VectorSeries& v, const Targets& tg, const CostWeights& w,
                   double dt) {
  const int nt = t.nt();
  double J = 0.0;
  for (int k = 1; k <= nt; ++k) {
    J += 0.5 * w.beta1 * dt * face_sq(t.u[k] - tg.u_Q[k]);
    J += 0.5 * w.beta2 * dt * cell_sq(t.phi[k] - tg.phi_Q[k]);
  }
  J += 0.5 * w.beta3 * face_sq(t.u[nt] - tg.u_Omega);
  J += 0.5 * w.beta4 * cell_sq(t.phi[nt] - tg.phi_Omega);
  for (const auto& f : v) J += 0.5 * w.gamma * dt * face_sq(f);
  return J;
}

}  // namespace

TEST(Cost, MatchesIndependentQuadrature) {
  const testutil::Setting s(16, 8);
  const auto solver = s.solver();
  const auto v = smooth_random_control(s.g, 8, 1.0, 4);
  const auto traj = solver.run(v, s.init());
  const Targets tg = Targets::from_trajectory(solver.run(zero_control(s.g, 8), s.init()));
  CostWeights w;
  w.beta1 = 0.7;
  w.beta2 = 1.3;
  w.beta3 = 0.4;
  w.beta4 = 0.9;
  w.gamma = 0.05;
  const double a = evaluate_cost(traj, v, tg, w, s.scheme.dt);
  const double b = oracle_cost(traj, v, tg, w, s.scheme.dt);
  EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(b));
}

TEST(Cost, ZeroOnOwnTrajectoryWithoutRegularization) {
  const testutil::Setting s(12, 5);
  const auto solver = s.solver();
  const auto traj = solver.run(zero_control(s.g, 5), s.init());
  CostWeights w;
  w.beta3 = w.beta4 = 1.0;
  EXPECT_EQ(evaluate_cost(traj, zero_control(s.g, 5), Targets::from_trajectory(traj), w, s.scheme.dt), 0.0);
}

TEST(Cost, WeightValidation) {
  CostWeights w;
  EXPECT_NO_THROW(w.validate());
  w.gamma = -1.0;
  EXPECT_THROW(w.validate(), HypothesisViolation);
  w = CostWeights{0, 0, 0, 0, 0};
  EXPECT_THROW(w.validate(), HypothesisViolation);
}

TEST(Control, InnerProductAndAxpy) {
  const Grid2D g(6, 6, 1.0, 1.0);
  VectorSeries a = {VectorField(g, 1.0), VectorField(g, 2.0)};
  const VectorSeries b = {VectorField(g, 3.0), VectorField(g, -1.0)};
  // Each slot: the face weights sum to 2 |Omega|.
  EXPECT_NEAR(inner_product_lq(a, b, 0.5), 0.5 * (3.0 - 2.0) * 2.0, 1e-14);
  axpy(a, 2.0, b);
  EXPECT_EQ(a[0].ux[3], 7.0);
  EXPECT_EQ(a[1].uy[5], 0.0);
  EXPECT_NEAR(norm_lq(b, 1.0), std::sqrt(2.0 * (9.0 + 1.0)), 1e-13);
}

TEST(Control, BoundsAndTargetsValidation) {
  const Grid2D g(6, 6, 1.0, 1.0);
  ControlBounds b = ControlBounds::constant(g, 3, -1.0, 1.0);
  EXPECT_NO_THROW(b.validate());
  b.lower[1].ux[4] = 2.0;
  EXPECT_THROW(b.validate(), HypothesisViolation);
  Targets t = Targets::zeros(g, 3);
  EXPECT_NO_THROW(t.validate(g, 3, 1e-10));
  EXPECT_THROW(t.validate(g, 4, 1e-10), Error);
  t.u_Q[2].x(2, 2) = 1.0;  // not divergence-free
  EXPECT_THROW(t.validate(g, 3, 1e-10), Error);
}
