#include <gtest/gtest.h>

#include <cstdlib>

#include "helpers.hpp"
#include "nchns/optimizer.hpp"

using namespace nchns;

namespace {

VectorSeries random_series(const Grid2D& g, int nt, unsigned seed, double scale) {
  VectorSeries s;
  for (int k = 0; k < nt; ++k) {
    VectorField f(g);
    f.ux = testutil::random_vec(g.nxfaces(), seed + 2 * k);
    f.uy = testutil::random_vec(g.nyfaces(), seed + 2 * k + 1);
    f *= scale;
    s.push_back(f);
  }
  return s;
}

}  // namespace

// Clipping against a per-point scan with non-constant bounds.
TEST(Optimizer, ProjectBoxMatchesPointwiseScan) {
  const Grid2D g(7, 5, 1.0, 1.0);
  const auto w = random_series(g, 3, 1, 2.0);
  ControlBounds b;
  b.lower = random_series(g, 3, 10, 0.5);
  b.upper = b.lower;
  for (auto& f : b.lower) f -= VectorField(g, 0.6);
  for (auto& f : b.upper) f += VectorField(g, 0.6);
  const auto p = project_box(w, b);
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < w[k].ux.size(); ++i) {
      double e = w[k].ux[i];
      if (e < b.lower[k].ux[i]) e = b.lower[k].ux[i];
      if (e > b.upper[k].ux[i]) e = b.upper[k].ux[i];
      EXPECT_EQ(p[k].ux[i], e);
    }
    for (std::size_t i = 0; i < w[k].uy.size(); ++i) {
      double e = w[k].uy[i];
      if (e < b.lower[k].uy[i]) e = b.lower[k].uy[i];
      if (e > b.upper[k].uy[i]) e = b.upper[k].uy[i];
      EXPECT_EQ(p[k].uy[i], e);
    }
  }
  // Idempotent.
  const auto pp = project_box(p, b);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(pp[k].ux, p[k].ux);
}

TEST(Optimizer, KktResidualVanishesAtFixedPoint) {
  const Grid2D g(6, 6, 1.0, 1.0);
  const auto b = ControlBounds::constant(g, 2, -1.0, 1.0);
  const auto gr = random_series(g, 2, 3, 3.0);
  // v = clip(-g) with gamma folded in: v - clip(v - g) = 0 where g = 0 on
  // free entries, g >= 0 at lower, g <= 0 at upper.
  VectorSeries v = project_box(random_series(g, 2, 5, 3.0), b);
  VectorSeries gg = gr;
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < v[k].ux.size(); ++i) {
      const double x = v[k].ux[i];
      gg[k].ux[i] = x <= -1.0 ? std::abs(gr[k].ux[i]) : x >= 1.0 ? -std::abs(gr[k].ux[i]) : 0.0;
    }
    for (std::size_t i = 0; i < v[k].uy.size(); ++i) {
      const double x = v[k].uy[i];
      gg[k].uy[i] = x <= -1.0 ? std::abs(gr[k].uy[i]) : x >= 1.0 ? -std::abs(gr[k].uy[i]) : 0.0;
    }
  }
  EXPECT_EQ(kkt_residual(v, gg, b, 0.1), 0.0);
  const auto c = check_complementarity(v, gg, b, 0.0);
  EXPECT_TRUE(c.pass());
  EXPECT_GT(c.lower_count, 0);
  EXPECT_GT(c.upper_count, 0);
  // Flip one sign at an active entry: the sign condition breaks.
  for (std::size_t i = 0; i < v[0].ux.size(); ++i)
    if (v[0].ux[i] <= -1.0) {
      gg[0].ux[i] = -1.0;
      break;
    }
  EXPECT_FALSE(check_complementarity(v, gg, b, 1e-6).pass());
  EXPECT_GT(kkt_residual(v, gg, b, 0.1), 0.0);
}

TEST(Optimizer, TrivialStationarityExitsImmediately) {
  const testutil::Setting s(16, 8);
  const auto solver = s.solver();
  const auto init = s.init();
  ControlProblem pb{&solver, init, Targets::from_trajectory(solver.run(zero_control(s.g, 8), init)), CostWeights{},
                    ControlBounds::constant(s.g, 8, -1, 1), AdjointScheme::discrete};
  const auto st = projected_gradient_descent(pb, zero_control(s.g, 8), OptimizerOptions{});
  EXPECT_EQ(st.status, OptimizerStatus::converged);
  EXPECT_EQ(st.iterations, 0);
  EXPECT_LE(st.history.front().kkt, 1e-10);
}

TEST(Optimizer, DescentIsMonotoneAndFeasible) {
  const testutil::Setting s(16, 10);
  const auto solver = s.solver();
  const auto init = s.init();
  const auto b = ControlBounds::constant(s.g, 10, -0.5, 0.5);
  const auto vt = project_box(smooth_random_control(s.g, 10, 1.0, 9), b);
  ControlProblem pb{&solver, init, Targets::from_trajectory(solver.run(vt, init)), CostWeights{}, b,
                    AdjointScheme::discrete};
  for (StepPolicy policy : {StepPolicy::fixed, StepPolicy::barzilai_borwein}) {
    OptimizerOptions o;
    o.max_iter = 15;
    o.policy = policy;
    int calls = 0;
    const auto st = projected_gradient_descent(pb, zero_control(s.g, 10), o, [&](const IterationRecord&) { ++calls; });
    EXPECT_EQ(calls, static_cast<int>(st.history.size()));
    for (std::size_t i = 1; i < st.history.size(); ++i) EXPECT_LE(st.history[i].J, st.history[i - 1].J);
    EXPECT_LT(st.history.back().J, 0.5 * st.history.front().J) << to_string(policy);
    for (const auto& f : st.v) EXPECT_LE(max_abs(f), 0.5);
  }
}

TEST(Optimizer, LoglogSlopeAndNames) {
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3};
  EXPECT_NEAR(loglog_slope(eps, {3e-2, 3e-4, 3e-6}, {true, true, true}), 2.0, 1e-12);
  EXPECT_NEAR(loglog_slope(eps, {1e-1, 1e-2, 5.0}, {true, true, false}), 1.0, 1e-12);
  EXPECT_TRUE(std::isnan(loglog_slope(eps, {1, 1, 1}, {true, false, false})));
  EXPECT_EQ(step_policy_from_string("bb"), StepPolicy::barzilai_borwein);
  EXPECT_EQ(to_string(StepPolicy::fixed), "fixed");
  EXPECT_THROW(step_policy_from_string("newton"), Error);
  EXPECT_EQ(to_string(OptimizerStatus::line_search_failed), "line_search_failed");
}

TEST(Optimizer, ThreadCountFromEnvironment) {
  setenv("NCHNS_THREADS", "3", 1);
  EXPECT_EQ(probe_threads(), 3);
  unsetenv("NCHNS_THREADS");
  EXPECT_GE(probe_threads(), 1);
}
