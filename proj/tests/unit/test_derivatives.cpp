#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nchns/adjoint.hpp"
#include "nchns/control.hpp"
#include "nchns/operators.hpp"
#include "nchns/optimizer.hpp"
#include "nchns/tangent.hpp"

using namespace nchns;

namespace {

struct Problem {
  testutil::Setting s;
  ForwardSolver solver;
  InitialData init;
  VectorSeries v, h;
  Targets targets;
  CostWeights w;

  Problem(int n, int nt)
      : s(n, nt), solver(s.solver()), init(s.init()), v(smooth_random_control(s.g, nt, 1.0, 7)),
        h(smooth_random_forcing(s.g, nt, 1.0, 3)) {
    targets = Targets::from_trajectory(solver.run(smooth_random_control(s.g, nt, 1.0, 99), init));
    w.beta3 = 0.5;
    w.beta4 = 0.25;
  }

  double duality_gap(AdjointScheme scheme) const {
    const auto traj = solver.run(v, init);
    const auto adj = run_adjoint(solver, traj, targets, w, scheme);
    const double a = inner_product_lq(reduced_gradient(v, adj, w.gamma), h, s.scheme.dt);
    const double t =
        directional_derivative_via_tangent(traj, run_tangent(solver, traj, h), targets, w, v, h, s.scheme.dt);
    return std::abs(a - t) / std::abs(t);
  }
};

}  // namespace

// Central differences of the forward map agree with the tangent to O(eps^2).
TEST(Tangent, MatchesCentralDifferences) {
  Problem p(16, 10);
  const auto traj = p.solver.run(p.v, p.init);
  const auto tan = run_tangent(p.solver, traj, p.h);
  const double eps = 1e-4;
  VectorSeries vp = p.v, vm = p.v;
  axpy(vp, eps, p.h);
  axpy(vm, -eps, p.h);
  const auto tp = p.solver.run(vp, p.init), tm = p.solver.run(vm, p.init);
  for (int k = 1; k <= 10; ++k) {
    const VectorField du = (1.0 / (2 * eps)) * (tp.u[k] - tm.u[k]);
    const ScalarField dphi = (1.0 / (2 * eps)) * (tp.phi[k] - tm.phi[k]);
    EXPECT_LT(max_abs(du - tan.xi[k]), 1e-6 * (max_abs(tan.xi[k]) + 1e-3));
    EXPECT_LT(max_abs(dphi - tan.eta[k]), 1e-6 * (max_abs(tan.eta[k]) + 1e-3));
  }
  EXPECT_EQ(max_abs(tan.xi[0]), 0.0);
  // Linearized velocity is projected like the state.
  EXPECT_LT(max_abs(divergence_face_to_cc(tan.xi[10])), 1e-10);
}

TEST(Adjoint, DiscreteIsExactTransposeOfTangent) {
  Problem p(16, 12);
  EXPECT_LT(p.duality_gap(AdjointScheme::discrete), 1e-11);
}

// The continuous adjoint is consistent, not exact: its gap shrinks when dx
// and dt are refined together at fixed final time.
TEST(Adjoint, ContinuousGapShrinksUnderRefinement) {
  const double coarse = Problem(16, 10).duality_gap(AdjointScheme::continuous);
  const double fine = Problem(32, 40).duality_gap(AdjointScheme::continuous);
  EXPECT_LT(coarse, 0.2);
  EXPECT_LT(fine, coarse);
}

TEST(Adjoint, TerminalDataAndShapes) {
  Problem p(12, 6);
  const auto traj = p.solver.run(p.v, p.init);
  for (AdjointScheme sch : {AdjointScheme::discrete, AdjointScheme::continuous}) {
    const auto adj = run_adjoint(p.solver, traj, p.targets, p.w, sch);
    EXPECT_EQ(adj.nt(), 6);
    EXPECT_EQ(adj.scheme, sch);
    EXPECT_LT(max_abs(divergence_face_to_cc(adj.p[3])), 1e-10);
  }
  // Continuous terminal data: q(T) = beta4 (phi(T) - phi_Omega).
  const auto adj = run_adjoint(p.solver, traj, p.targets, p.w, AdjointScheme::continuous);
  const ScalarField q = p.w.beta4 * (traj.phi[6] - p.targets.phi_Omega);
  EXPECT_LT(max_abs(adj.q[6] - q), 1e-14);
}

TEST(Adjoint, SchemeNames) {
  EXPECT_EQ(adjoint_scheme_from_string("discrete"), AdjointScheme::discrete);
  EXPECT_EQ(adjoint_scheme_from_string(to_string(AdjointScheme::continuous)), AdjointScheme::continuous);
  EXPECT_THROW(adjoint_scheme_from_string("both"), Error);
}

TEST(Adjoint, ReducedGradientIsGammaVPlusP) {
  Problem p(12, 5);
  const auto traj = p.solver.run(p.v, p.init);
  const auto adj = run_adjoint(p.solver, traj, p.targets, p.w, AdjointScheme::discrete);
  const auto g = reduced_gradient(p.v, adj, 0.3);
  for (int k = 0; k < 5; ++k) EXPECT_LT(max_abs(g[k] - (0.3 * p.v[k] + adj.p[k + 1])), 1e-15);
}

TEST(Taylor, CostRemainderIsSecondOrder) {
  Problem p(16, 10);
  ControlProblem pb{&p.solver, p.init, p.targets, p.w, ControlBounds::constant(p.s.g, 10, -5, 5),
                    AdjointScheme::discrete};
  const auto r = taylor_test(pb, p.v, p.h, {1e-1, 1e-2, 1e-3, 1e-4});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.slope, 2.0, 0.2);
  // Negative control: a perturbed gradient leaves a first-order remainder.
  const auto bad = taylor_test(pb, p.v, p.h, {1e-1, 1e-2, 1e-3, 1e-4}, 1.1);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.slope, 1.0, 0.2);
}

TEST(Taylor, StateRemainderIsSecondOrder) {
  Problem p(16, 10);
  const auto r = tangent_taylor_test(p.solver, p.init, p.v, p.h, {1e-1, 1e-2, 1e-3, 1e-4});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.slope, 2.0, 0.2);
}
