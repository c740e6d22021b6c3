#pragma once

// The control problem: reduced cost and gradient, box projection, projected
// gradient descent with Armijo backtracking, and Taylor-remainder checks.

#include <functional>
#include <string>
#include <vector>

#include "nchns/adjoint.hpp"
#include "nchns/control.hpp"
#include "nchns/forward.hpp"
#include "nchns/tangent.hpp"

namespace nchns {

struct ControlProblem {
  const ForwardSolver* solver = nullptr;
  InitialData init;
  Targets targets;
  CostWeights weights;
  ControlBounds bounds;
  AdjointScheme adjoint = AdjointScheme::discrete;

  double dt() const { return solver->scheme().dt; }
  int nt() const { return solver->scheme().nt; }
};

struct Evaluation {
  StateTrajectory traj;
  double J = 0.0;
};

Evaluation evaluate(const ControlProblem& pb, const VectorSeries& v);
/// Reduced gradient at v given its trajectory (runs the adjoint).
VectorSeries gradient(const ControlProblem& pb, const VectorSeries& v, const StateTrajectory& traj);

/// Sensitivity of J in direction h from a tangent trajectory, using the
/// quadratures of evaluate_cost.
double directional_derivative_via_tangent(const StateTrajectory& traj, const TangentTrajectory& tan,
                                          const Targets& targets, const CostWeights& w, const VectorSeries& v,
                                          const VectorSeries& h, double dt);

/// Componentwise clip of w into the bounds.
VectorSeries project_box(const VectorSeries& w, const ControlBounds& b);
/// || v - project_box(v - g) ||_{L2(Q)}
double kkt_residual(const VectorSeries& v, const VectorSeries& g, const ControlBounds& b, double dt);

enum class StepPolicy { fixed, barzilai_borwein };
std::string to_string(StepPolicy p);
StepPolicy step_policy_from_string(const std::string& s);

struct OptimizerOptions {
  int max_iter = 300;
  /// Stop when the KKT residual drops below tol (absolute) or below
  /// rel_tol times the initial residual.
  double tol = 1e-10;
  double rel_tol = 1e-9;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_shrinks = 40;
  StepPolicy policy = StepPolicy::barzilai_borwein;
};

enum class OptimizerStatus { converged, max_iterations, line_search_failed };
std::string to_string(OptimizerStatus s);

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double grad_norm = 0.0;
  double kkt = 0.0;
  double tau = 0.0;  // accepted step (0 for the initial record)
  int shrinks = 0;
};

struct OptimizerState {
  VectorSeries v;
  VectorSeries g;
  StateTrajectory traj;
  std::vector<IterationRecord> history;
  OptimizerStatus status = OptimizerStatus::max_iterations;
  int iterations = 0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Projected gradient: v+ = project_box(v - tau g), tau backtracked from its
/// initial value until J(v+) <= J(v) - c tau ||(v - v+)/tau||^2.
OptimizerState projected_gradient_descent(const ControlProblem& pb, const VectorSeries& v0,
                                          const OptimizerOptions& opt, const IterationCallback& cb = {});

/// Sign conditions of the variational inequality at a point: on free faces
/// |g| <= tol, at the lower bound g >= -tol, at the upper bound g <= tol.
struct ComplementarityReport {
  double worst_free = 0.0;   // max |g| over strictly free entries
  double worst_lower = 0.0;  // max(-g, 0) over entries at the lower bound
  double worst_upper = 0.0;  // max(g, 0) over entries at the upper bound
  long free_count = 0, lower_count = 0, upper_count = 0;
  double tol = 0.0;
  bool pass() const { return worst_free <= tol && worst_lower <= tol && worst_upper <= tol; }
};
ComplementarityReport check_complementarity(const VectorSeries& v, const VectorSeries& g, const ControlBounds& b,
                                            double tol);

struct TaylorReport {
  std::vector<double> eps;
  std::vector<double> remainder;
  std::vector<bool> used;  // entries above the round-off floor
  double slope = 0.0;
  double derivative = 0.0;  // the linear term used (per unit eps)
  bool pass = false;
};

/// log-log least-squares slope of remainder(eps) over entries flagged used.
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& r, const std::vector<bool>& used);

/// Cost-level Taylor test: R(eps) = |J(v + eps h) - J(v) - eps <g, h>|.
/// gradient_scale multiplies g (1 for the real check, != 1 as a negative control).
TaylorReport taylor_test(const ControlProblem& pb, const VectorSeries& v, const VectorSeries& h,
                         const std::vector<double>& eps, double gradient_scale = 1.0);

/// State-level Taylor test: R(eps) = ||S(v + eps h) - S(v) - eps S'(v)h||_Z with
/// ||(u, phi)||_Z = max_k ||u_k|| + max_k ||phi_k||.
TaylorReport tangent_taylor_test(const ForwardSolver& solver, const InitialData& init, const VectorSeries& v,
                                 const VectorSeries& h, const std::vector<double>& eps);

/// Number of concurrent forward probes: NCHNS_THREADS if set, else hardware.
int probe_threads();

}  // namespace nchns
