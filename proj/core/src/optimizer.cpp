#include "nchns/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "nchns/error.hpp"
#include "nchns/operators.hpp"

namespace nchns {

Evaluation evaluate(const ControlProblem& pb, const VectorSeries& v) {
  Evaluation e;
  e.traj = pb.solver->run(v, pb.init);
  e.J = evaluate_cost(e.traj, v, pb.targets, pb.weights, pb.dt());
  return e;
}

VectorSeries gradient(const ControlProblem& pb, const VectorSeries& v, const StateTrajectory& traj) {
  const AdjointTrajectory adj = run_adjoint(*pb.solver, traj, pb.targets, pb.weights, pb.adjoint);
  return reduced_gradient(v, adj, pb.weights.gamma);
}

double directional_derivative_via_tangent(const StateTrajectory& traj, const TangentTrajectory& tan,
                                          const Targets& targets, const CostWeights& w, const VectorSeries& v,
                                          const VectorSeries& h, double dt) {
  const int nt = traj.nt();
  if (tan.nt() != nt) throw Error("directional derivative: tangent/trajectory length mismatch");
  double track_u = 0.0, track_phi = 0.0;
  for (int k = 1; k <= nt; ++k) {
    if (w.beta1 != 0.0) track_u += inner_product_l2(traj.u[k] - targets.u_Q[k], tan.xi[k]);
    if (w.beta2 != 0.0) track_phi += inner_product_l2(traj.phi[k] - targets.phi_Q[k], tan.eta[k]);
  }
  double d = w.beta1 * dt * track_u + w.beta2 * dt * track_phi;
  if (w.beta3 != 0.0) d += w.beta3 * inner_product_l2(traj.u[nt] - targets.u_Omega, tan.xi[nt]);
  if (w.beta4 != 0.0) d += w.beta4 * inner_product_l2(traj.phi[nt] - targets.phi_Omega, tan.eta[nt]);
  if (w.gamma != 0.0) d += w.gamma * inner_product_lq(v, h, dt);
  return d;
}

VectorSeries project_box(const VectorSeries& w, const ControlBounds& b) {
  if (w.size() != b.lower.size()) throw GridMismatch("project_box: length mismatch");
  VectorSeries out = w;
  for (std::size_t k = 0; k < w.size(); ++k) {
    for (std::size_t i = 0; i < out[k].ux.size(); ++i)
      out[k].ux[i] = std::max(b.lower[k].ux[i], std::min(out[k].ux[i], b.upper[k].ux[i]));
    for (std::size_t i = 0; i < out[k].uy.size(); ++i)
      out[k].uy[i] = std::max(b.lower[k].uy[i], std::min(out[k].uy[i], b.upper[k].uy[i]));
  }
  return out;
}

double kkt_residual(const VectorSeries& v, const VectorSeries& g, const ControlBounds& b, double dt) {
  VectorSeries step = v;
  axpy(step, -1.0, g);
  VectorSeries r = v;
  axpy(r, -1.0, project_box(step, b));
  return norm_lq(r, dt);
}

std::string to_string(StepPolicy p) { return p == StepPolicy::fixed ? "fixed" : "bb"; }

StepPolicy step_policy_from_string(const std::string& s) {
  if (s == "fixed") return StepPolicy::fixed;
  if (s == "bb") return StepPolicy::barzilai_borwein;
  throw Error("unknown step policy '" + s + "' (expected fixed or bb)");
}

std::string to_string(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::converged: return "converged";
    case OptimizerStatus::max_iterations: return "max_iterations";
    case OptimizerStatus::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

OptimizerState projected_gradient_descent(const ControlProblem& pb, const VectorSeries& v0,
                                          const OptimizerOptions& opt, const IterationCallback& cb) {
  pb.bounds.validate();
  const double dt = pb.dt();
  const double tau0 = 1.0 / (pb.weights.gamma + 1.0);

  OptimizerState st;
  st.v = project_box(v0, pb.bounds);
  Evaluation ev = evaluate(pb, st.v);
  st.traj = std::move(ev.traj);
  double J = ev.J;
  st.g = gradient(pb, st.v, st.traj);

  double kkt = kkt_residual(st.v, st.g, pb.bounds, dt);
  const double stop = std::max(opt.tol, opt.rel_tol * kkt);
  IterationRecord rec{0, J, norm_lq(st.g, dt), kkt, 0.0, 0};
  st.history.push_back(rec);
  if (cb) cb(rec);

  VectorSeries prev_v, prev_g;
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (kkt <= stop) {
      st.status = OptimizerStatus::converged;
      return st;
    }
    double tau = tau0;
    if (opt.policy == StepPolicy::barzilai_borwein && !prev_v.empty()) {
      VectorSeries s = st.v, y = st.g;
      axpy(s, -1.0, prev_v);
      axpy(y, -1.0, prev_g);
      const double sy = inner_product_lq(s, y, dt);
      const double ss = inner_product_lq(s, s, dt);
      if (sy > 0.0 && ss > 0.0) tau = std::clamp(ss / sy, 1e-8, 1e8);
    }

    bool accepted = false;
    int shrinks = 0;
    VectorSeries trial;
    Evaluation trial_ev;
    for (; shrinks <= opt.max_shrinks; ++shrinks) {
      trial = st.v;
      axpy(trial, -tau, st.g);
      trial = project_box(trial, pb.bounds);
      VectorSeries d = st.v;
      axpy(d, -1.0, trial);
      const double dn2 = inner_product_lq(d, d, dt);
      if (dn2 == 0.0) break;
      try {
        trial_ev = evaluate(pb, trial);
      } catch (const CflViolation&) {
        tau *= opt.shrink;
        continue;
      }
      if (trial_ev.J <= J - opt.armijo_c * dn2 / tau) {
        accepted = true;
        break;
      }
      tau *= opt.shrink;
    }
    if (!accepted) {
      st.status = OptimizerStatus::line_search_failed;
      return st;
    }

    prev_v = std::move(st.v);
    prev_g = std::move(st.g);
    st.v = std::move(trial);
    st.traj = std::move(trial_ev.traj);
    J = trial_ev.J;
    st.g = gradient(pb, st.v, st.traj);
    kkt = kkt_residual(st.v, st.g, pb.bounds, dt);
    st.iterations = it;
    rec = IterationRecord{it, J, norm_lq(st.g, dt), kkt, tau, shrinks};
    st.history.push_back(rec);
    if (cb) cb(rec);
  }
  st.status = kkt <= stop ? OptimizerStatus::converged : OptimizerStatus::max_iterations;
  return st;
}

ComplementarityReport check_complementarity(const VectorSeries& v, const VectorSeries& g, const ControlBounds& b,
                                            double tol) {
  ComplementarityReport r;
  r.tol = tol;
  auto visit = [&](double vi, double gi, double lo, double hi) {
    if (vi <= lo) {
      ++r.lower_count;
      r.worst_lower = std::max(r.worst_lower, -gi);
    } else if (vi >= hi) {
      ++r.upper_count;
      r.worst_upper = std::max(r.worst_upper, gi);
    } else {
      ++r.free_count;
      r.worst_free = std::max(r.worst_free, std::abs(gi));
    }
  };
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (std::size_t i = 0; i < v[k].ux.size(); ++i) visit(v[k].ux[i], g[k].ux[i], b.lower[k].ux[i], b.upper[k].ux[i]);
    for (std::size_t i = 0; i < v[k].uy.size(); ++i) visit(v[k].uy[i], g[k].uy[i], b.lower[k].uy[i], b.upper[k].uy[i]);
  }
  return r;
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& r, const std::vector<bool>& used) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!used[i]) continue;
    const double x = std::log(eps[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int probe_threads() {
  if (const char* s = std::getenv("NCHNS_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

// Runs fn(i) for i in [0, n) on at most probe_threads() threads.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int nth = std::min(n, probe_threads());
  if (nth <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < nth; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

VectorSeries shifted(const VectorSeries& v, double e, const VectorSeries& h) {
  VectorSeries r = v;
  axpy(r, e, h);
  return r;
}

void finish(TaylorReport& rep, double floor) {
  rep.used.assign(rep.eps.size(), false);
  for (std::size_t i = 0; i < rep.eps.size(); ++i) rep.used[i] = std::isfinite(rep.remainder[i]) && rep.remainder[i] > floor;
  rep.slope = loglog_slope(rep.eps, rep.remainder, rep.used);
  rep.pass = std::isfinite(rep.slope) && rep.slope >= 1.8 && rep.slope <= 2.2;
}

}  // namespace

TaylorReport taylor_test(const ControlProblem& pb, const VectorSeries& v, const VectorSeries& h,
                         const std::vector<double>& eps, double gradient_scale) {
  if (eps.size() < 4) throw Error("taylor_test: need at least 4 step sizes");
  const double dt = pb.dt();
  const Evaluation base = evaluate(pb, v);
  const VectorSeries g = gradient(pb, v, base.traj);

  TaylorReport rep;
  rep.eps = eps;
  rep.derivative = gradient_scale * inner_product_lq(g, h, dt);
  std::vector<double> J(eps.size());
  parallel_for(static_cast<int>(eps.size()), [&](int i) { J[i] = evaluate(pb, shifted(v, eps[i], h)).J; });
  rep.remainder.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) rep.remainder[i] = std::abs(J[i] - base.J - eps[i] * rep.derivative);
  finish(rep, 1e-13 * std::max(std::abs(base.J), 1e-300));
  return rep;
}

TaylorReport tangent_taylor_test(const ForwardSolver& solver, const InitialData& init, const VectorSeries& v,
                                 const VectorSeries& h, const std::vector<double>& eps) {
  if (eps.size() < 4) throw Error("tangent_taylor_test: need at least 4 step sizes");
  const StateTrajectory base = solver.run(v, init);
  const TangentTrajectory tan = run_tangent(solver, base, h);

  double scale = 0.0;
  for (std::size_t k = 0; k < base.u.size(); ++k) scale = std::max(scale, norm_l2(base.u[k]) + norm_l2(base.phi[k]));

  TaylorReport rep;
  rep.eps = eps;
  rep.remainder.resize(eps.size());
  parallel_for(static_cast<int>(eps.size()), [&](int i) {
    const StateTrajectory pert = solver.run(shifted(v, eps[i], h), init);
    double mu = 0.0, mphi = 0.0;
    for (std::size_t k = 0; k < base.u.size(); ++k) {
      VectorField du = pert.u[k] - base.u[k];
      du.axpy(-eps[i], tan.xi[k]);
      ScalarField dphi = pert.phi[k] - base.phi[k];
      dphi.axpy(-eps[i], tan.eta[k]);
      mu = std::max(mu, norm_l2(du));
      mphi = std::max(mphi, norm_l2(dphi));
    }
    rep.remainder[i] = mu + mphi;
  });
  finish(rep, 1e-13 * std::max(scale, 1e-300));
  return rep;
}

}  // namespace nchns
