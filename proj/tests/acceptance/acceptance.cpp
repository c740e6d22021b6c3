// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and sizes are fixed here and never relaxed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "nchns/commands.hpp"
#include "nchns/config.hpp"
#include "nchns/operators.hpp"
#include "nchns/optimizer.hpp"
#include "nchns/presets.hpp"

using namespace nchns;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// The common physical setting: 16 x 16 box, auto-scaled Gaussian kernel,
// bubble in a decaying vortex.
struct Case {
  Grid2D g;
  PhysicsParams phys;
  Kernel kernel;
  TimeScheme scheme;
  InitialData init;

  Case(int n, int nt, double dt_fraction)
      : g(n, n, 16.0, 16.0),
        kernel(auto_scale_kernel(Kernel::gaussian(g, 1.0, 1.0), phys.potential, phys.constants.c1)) {
    scheme.nt = nt;
    scheme.dt = dt_fraction * g.dx() * g.dx() / (8.0 * phys.viscosity.upper);
    init = {taylor_vortex(g, 0.5), make_phase_field("bubble(4, 8, 8, 1)", g)};
  }
  ForwardSolver solver() const { return ForwardSolver(g, kernel, phys, scheme); }
};

// ---------------------------------------------------------------- 1
Outcome hypotheses() {
  RunConfig c = parse_config_string("grid.nx = 64\ngrid.ny = 64\n");
  c.output_dir = (std::filesystem::temp_directory_path() / "nchns_acceptance_validate").string();
  std::ostringstream log;
  const int status = cmd_validate(c, log);
  const Grid2D g = make_grid(c);
  const Kernel k = make_kernel(c, g);
  const double floor = 1.0 + c.constants.c1;
  const bool ok = status == 0 && k.min_a() >= floor * (1.0 - 1e-12);
  return {ok, fmt("validate exit %d, min a = %.15g (need >= %.15g)", status, k.min_a(), floor)};
}

// ---------------------------------------------------------------- 2, 3
struct LongRun {
  double mass_rel = 0.0, max_div = 0.0, worst_rise = -1e300, tol = 0.0;
  int rise_step = -1;
};

LongRun long_run() {
  static std::optional<LongRun> cached;
  if (cached) return *cached;
  const Case c(64, 500, 1.0);
  const auto solver = c.solver();
  const StateTrajectory t = solver.run(zero_control(c.g, 500), c.init);
  const auto rows = diagnostics(solver, t);
  LongRun r;
  const double m0 = rows[0].mass;
  const double E0 = rows[0].total_energy();
  r.tol = 10.0 * c.scheme.dt * std::abs(E0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    r.mass_rel = std::max(r.mass_rel, std::abs(rows[k].mass - m0) / std::abs(m0));
    r.max_div = std::max(r.max_div, rows[k].max_div);
    if (k > 0) {
      const double rise = rows[k].total_energy() - rows[k - 1].total_energy();
      if (rise > r.worst_rise) {
        r.worst_rise = rise;
        r.rise_step = static_cast<int>(k);
      }
    }
  }
  cached = r;
  return r;
}

Outcome conservation() {
  const LongRun r = long_run();
  return {r.mass_rel <= 1e-10 && r.max_div <= 1e-9,
          fmt("64^2, 500 steps: max relative mass drift %.3e (<= 1e-10), max |div u| %.3e (<= 1e-9)", r.mass_rel,
              r.max_div)};
}

Outcome energy() {
  const LongRun r = long_run();
  return {r.worst_rise <= r.tol,
          fmt("largest per-step energy change %.3e at step %d (tolerance 10 dt E0 = %.3e)", r.worst_rise,
              r.rise_step, r.tol)};
}

// ---------------------------------------------------------------- 4
Outcome tangent() {
  const Case c(32, 50, 1.0);
  const auto solver = c.solver();
  const auto v = smooth_random_control(c.g, 50, 1.0, 7);
  const auto h = smooth_random_forcing(c.g, 50, 1.0, 3);
  const TaylorReport r = tangent_taylor_test(solver, c.init, v, h, {1e-1, 1e-2, 1e-3, 1e-4});
  return {r.pass && r.slope >= 1.8 && r.slope <= 2.2,
          fmt("32^2 x 50: slope %.4f, remainders %.2e %.2e %.2e %.2e", r.slope, r.remainder[0], r.remainder[1],
              r.remainder[2], r.remainder[3])};
}

// ---------------------------------------------------------------- 5
struct GapResult {
  double gap, taylor_slope;
  bool taylor_pass;
};

GapResult gradient_at(int n, int nt, double dt_fraction, bool with_taylor) {
  const Case c(n, nt, dt_fraction);
  const auto solver = c.solver();
  const auto v = smooth_random_control(c.g, nt, 1.0, 7);
  const auto h = smooth_random_forcing(c.g, nt, 1.0, 3);
  CostWeights w;
  w.beta1 = w.beta2 = w.beta3 = w.beta4 = 1.0;
  w.gamma = 1e-3;
  const Targets tg = Targets::from_trajectory(solver.run(smooth_random_control(c.g, nt, 1.0, 99), c.init));
  const auto traj = solver.run(v, c.init);
  const auto adj = run_adjoint(solver, traj, tg, w, AdjointScheme::continuous);
  const double a = inner_product_lq(reduced_gradient(v, adj, w.gamma), h, c.scheme.dt);
  const double t =
      directional_derivative_via_tangent(traj, run_tangent(solver, traj, h), tg, w, v, h, c.scheme.dt);
  GapResult r{std::abs(a - t) / std::abs(t), 0.0, true};
  if (with_taylor) {
    ControlProblem pb{&solver, c.init, tg, w, ControlBounds::constant(c.g, nt, -5.0, 5.0), AdjointScheme::discrete};
    const TaylorReport tr = taylor_test(pb, v, h, {1e-1, 1e-2, 1e-3, 1e-4});
    r.taylor_slope = tr.slope;
    r.taylor_pass = tr.pass && tr.slope >= 1.8 && tr.slope <= 2.2;
  }
  return r;
}

Outcome gradient_check() {
  // Same final time on both levels: dx and dt halve together.
  const GapResult coarse = gradient_at(64, 100, 0.25, true);
  const GapResult fine = gradient_at(128, 200, 0.5, false);
  const bool ok = coarse.taylor_pass && coarse.gap <= 2e-2 && fine.gap < coarse.gap;
  return {ok, fmt("taylor slope %.4f; adjoint-system gap %.3e at 64^2 (<= 2e-2), %.3e at 128^2 (shrinks)",
                  coarse.taylor_slope, coarse.gap, fine.gap)};
}

// ---------------------------------------------------------------- 6
Outcome optimization() {
  const Case c(32, 50, 1.0);
  const auto solver = c.solver();
  const auto bounds = ControlBounds::constant(c.g, 50, -1.0, 1.0);
  const auto v_true = project_box(smooth_random_control(c.g, 50, 1.5, 99), bounds);
  CostWeights w;
  w.beta1 = w.beta2 = 1.0;
  w.beta3 = w.beta4 = 0.0;
  w.gamma = 1e-3;
  const ControlProblem pb{&solver, c.init, Targets::from_trajectory(solver.run(v_true, c.init)), w, bounds,
                          AdjointScheme::discrete};
  const OptimizerOptions opt;  // defaults: Barzilai-Borwein steps, up to 300 iterations
  const OptimizerState st = projected_gradient_descent(pb, zero_control(c.g, 50), opt);
  const double J0 = st.history.front().J;
  const double J50 = st.history[std::min<std::size_t>(50, st.history.size() - 1)].J;
  bool monotone = true;
  for (std::size_t i = 1; i < st.history.size(); ++i) monotone = monotone && st.history[i].J <= st.history[i - 1].J;
  const ComplementarityReport cr = check_complementarity(st.v, st.g, bounds, 1e-6);
  const bool ok = J50 * 10.0 <= J0 && monotone && cr.pass();
  return {ok, fmt("J0 %.4e, J50 %.4e (ratio %.1f >= 10), monotone %s, %d iters, complementarity free %.2e "
                  "lower %.2e upper %.2e (tol 1e-6; %ld/%ld active)",
                  J0, J50, J0 / J50, monotone ? "yes" : "no", st.iterations, cr.worst_free, cr.worst_lower,
                  cr.worst_upper, cr.lower_count + cr.upper_count,
                  cr.lower_count + cr.upper_count + cr.free_count)};
}

// ---------------------------------------------------------------- 7
Outcome stationarity() {
  const Case c(32, 50, 1.0);
  const auto solver = c.solver();
  CostWeights w;
  w.gamma = 1e-3;
  const ControlProblem pb{&solver, c.init, Targets::from_trajectory(solver.run(zero_control(c.g, 50), c.init)), w,
                          ControlBounds::constant(c.g, 50, -1.0, 1.0), AdjointScheme::discrete};
  const OptimizerState st = projected_gradient_descent(pb, zero_control(c.g, 50), OptimizerOptions{});
  const double kkt = st.history.front().kkt;
  return {kkt <= 1e-10 && st.iterations == 0 && st.status == OptimizerStatus::converged,
          fmt("initial KKT residual %.3e (<= 1e-10), exit after %d iterations (%s)", kkt, st.iterations,
              to_string(st.status).c_str())};
}

// ---------------------------------------------------------------- 8
double z_norm_diff(const StateTrajectory& a, const StateTrajectory& b) {
  double mu = 0.0, mp = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    mu = std::max(mu, norm_l2(a.u[k] - b.u[k]));
    mp = std::max(mp, norm_l2(a.phi[k] - b.phi[k]));
  }
  return mu + mp;
}

Outcome stability() {
  const Case c(32, 50, 1.0);
  const auto solver = c.solver();
  const auto v1 = smooth_random_control(c.g, 50, 1.0, 7);
  const auto h = smooth_random_control(c.g, 50, 1.0, 21);
  const auto s1 = solver.run(v1, c.init);
  double lo = 1e300, hi = 0.0;
  std::string ratios;
  for (double sep : {1e-1, 1e-2, 1e-3}) {
    VectorSeries v2 = v1;
    axpy(v2, sep, h);
    VectorSeries d = v2;
    axpy(d, -1.0, v1);
    const double ratio = z_norm_diff(solver.run(v2, c.init), s1) / norm_lq(d, c.scheme.dt);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ratios += fmt(" %.4f", ratio);
  }
  return {hi <= 2.0 * lo, fmt("Lipschitz ratios at separations 1e-1 1e-2 1e-3:%s (max/min %.3f <= 2)",
                              ratios.c_str(), hi / lo)};
}

// ---------------------------------------------------------------- 9
Outcome oracles() {
  const Grid2D g(32, 32, 16.0, 16.0);
  const Kernel k = Kernel::gaussian(g, 1.0, 1.0);
  ScalarField phi = make_phase_field("random(1, 17)", g);

  // Direct O(N^2) midpoint sum.
  const ScalarField fast = convolve(k, phi);
  double err = 0.0, scale = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double s = 0.0;
      for (int q = 0; q < g.ny; ++q)
        for (int p = 0; p < g.nx; ++p) s += k.value(g.xc(i) - g.xc(p), g.yc(j) - g.yc(q)) * phi(p, q);
      s *= g.cell_volume();
      err = std::max(err, std::abs(fast(i, j) - s));
      scale = std::max(scale, std::abs(s));
    }
  const double conv_rel = err / scale;

  // Clipping against a per-point scan.
  const int nt = 5;
  const auto w = smooth_random_forcing(g, nt, 3.0, 5);
  ControlBounds b = ControlBounds::constant(g, nt, -1.0, 0.5);
  b.lower[2] = smooth_random_forcing(g, nt, 0.4, 6)[2];
  b.lower[2] -= VectorField(g, 1.0);
  const auto clipped = project_box(w, b);
  long mismatches = 0;
  for (int s = 0; s < nt; ++s) {
    for (std::size_t i = 0; i < w[s].ux.size(); ++i) {
      double e = w[s].ux[i];
      if (e < b.lower[s].ux[i]) e = b.lower[s].ux[i];
      if (e > b.upper[s].ux[i]) e = b.upper[s].ux[i];
      mismatches += clipped[s].ux[i] != e;
    }
    for (std::size_t i = 0; i < w[s].uy.size(); ++i) {
      double e = w[s].uy[i];
      if (e < b.lower[s].uy[i]) e = b.lower[s].uy[i];
      if (e > b.upper[s].uy[i]) e = b.upper[s].uy[i];
      mismatches += clipped[s].uy[i] != e;
    }
  }

  // Cost against explicit face/cell loops.
  const Case c(32, 10, 1.0);
  const auto solver = c.solver();
  const auto v = smooth_random_control(c.g, 10, 1.0, 8);
  const auto traj = solver.run(v, c.init);
  const Targets tg = Targets::from_trajectory(solver.run(zero_control(c.g, 10), c.init));
  CostWeights cw{0.7, 1.3, 0.4, 0.9, 0.05};
  auto face_sq = [&](const VectorField& a) {
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) s += (i == 0 || i == g.nx ? 0.5 : 1.0) * a.x(i, j) * a.x(i, j);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) s += (j == 0 || j == g.ny ? 0.5 : 1.0) * a.y(i, j) * a.y(i, j);
    return s * g.cell_volume();
  };
  auto cell_sq = [&](const ScalarField& a) {
    double s = 0.0;
    for (double x : a.values) s += x * x;
    return s * g.cell_volume();
  };
  const double dt = c.scheme.dt;
  double J = 0.0;
  for (int n = 1; n <= 10; ++n) {
    J += 0.5 * cw.beta1 * dt * face_sq(traj.u[n] - tg.u_Q[n]);
    J += 0.5 * cw.beta2 * dt * cell_sq(traj.phi[n] - tg.phi_Q[n]);
  }
  J += 0.5 * cw.beta3 * face_sq(traj.u[10] - tg.u_Omega) + 0.5 * cw.beta4 * cell_sq(traj.phi[10] - tg.phi_Omega);
  for (const auto& f : v) J += 0.5 * cw.gamma * dt * face_sq(f);
  const double cost_rel = std::abs(evaluate_cost(traj, v, tg, cw, dt) - J) / std::abs(J);

  return {conv_rel <= 1e-12 && mismatches == 0 && cost_rel <= 1e-12,
          fmt("convolution vs direct sum %.2e (<= 1e-12), clipping mismatches %ld (exact), cost vs quadrature "
              "%.2e (<= 1e-12)",
              conv_rel, mismatches, cost_rel)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  // Criteria 2 and 3 share one run; its cost is charged to 2.
  const Criterion all[] = {
      {1, "hypothesis validation", 5.0, hypotheses},
      {2, "conservation", 120.0, conservation},
      {3, "energy sanity", 120.0, energy},
      {4, "tangent correctness", 180.0, tangent},
      {5, "gradient correctness", 600.0, gradient_check},
      {6, "optimization", 900.0, optimization},
      {7, "trivial stationarity", 60.0, stationarity},
      {8, "stability estimate", 60.0, stability},
      {9, "oracle equivalences", 60.0, oracles},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %s: %s  %s  [%.2f s, budget %.0f s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
