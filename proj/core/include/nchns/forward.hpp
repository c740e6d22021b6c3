#pragma once

// State solver: semi-implicit nonlocal Cahn-Hilliard step followed by an
// explicit Navier-Stokes predictor and a pressure projection.
//
// One step n -> n+1, with M = diag(1/(a+s)) - dt L (SPD, state independent):
//   rhs    = phi - dt div(u phi) + dt L(-K*phi + F'(phi) - s phi)
//   phi'   = M^{-1} rhs / (a+s)
//   mu'    = a phi' - K*phi' + F'(phi')
//   u*     = u + dt [2 div(nu(phi') Du) - div(u (x) u) + mu' grad phi' + v]
//   u'     = P u*,  P = I + G (-L)^{-1} D on masked fields

#include <optional>
#include <vector>

#include "nchns/grid.hpp"
#include "nchns/linear_solvers.hpp"
#include "nchns/nonlocal.hpp"
#include "nchns/physics.hpp"

namespace nchns {

struct TimeScheme {
  double dt = 0.0;
  int nt = 0;
  double stabilization = 2.0;
  double tol_p = 1e-10;
  bool enforce_cfl = true;

  double final_time() const { return dt * nt; }
};

struct InitialData {
  VectorField u0;
  ScalarField phi0;
};

/// Levels k = 0..nt. pi[0] is zero (no pressure at the initial level).
struct StateTrajectory {
  std::vector<double> times;
  VectorSeries u;
  ScalarSeries phi;
  ScalarSeries mu;
  ScalarSeries pi;

  int nt() const { return static_cast<int>(u.size()) - 1; }
};

struct DiagnosticsRow {
  int step = 0;
  double time = 0.0;
  double mass = 0.0;
  double kinetic_energy = 0.0;
  double free_energy = 0.0;
  double max_div = 0.0;
  double max_u = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;

  double total_energy() const { return kinetic_energy + free_energy; }
};

class ForwardSolver {
 public:
  ForwardSolver(const Grid2D& g, Kernel kernel, PhysicsParams physics, TimeScheme scheme);

  const Grid2D& grid() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  const PhysicsParams& physics() const { return physics_; }
  const TimeScheme& scheme() const { return scheme_; }

  struct ChState {
    ScalarField phi, mu;
  };
  struct NsState {
    VectorField u;
    ScalarField pi;
  };

  ChState step_ch(const ScalarField& phi, const VectorField& u) const;
  NsState step_ns(const VectorField& u, const ScalarField& phi1, const ScalarField& mu1,
                  const VectorField& v) const;

  /// v has nt entries (one per step slot).
  StateTrajectory run(const VectorSeries& v, const InitialData& init) const;

  /// Leray projection of a face field; optionally returns the pressure that
  /// realizes it for a predictor w = u*, i.e. u* - dt grad(pi) = P u*.
  VectorField project(const VectorField& w, ScalarField* pressure = nullptr) const;
  /// Solves M psi = rhs and returns psi / (a + s).
  ScalarField ch_solve(const ScalarField& rhs) const;
  /// Transpose of ch_solve.
  ScalarField ch_solve_t(const ScalarField& x) const;
  /// a + s, the implicit diagonal of the CH step.
  const ScalarField& implicit_weight() const { return a_plus_s_; }

  /// Largest dt admissible for velocity u (diffusive and advective limits).
  double stable_dt(const VectorField& u) const;
  /// Throws CflViolation if scheme().dt exceeds stable_dt(u).
  void check_cfl(const VectorField& u, int step) const;

  /// Throws HypothesisViolation unless u0 is discretely divergence-free,
  /// no-slip, and both fields are finite.
  void validate_initial_data(const InitialData& init) const;

 private:
  Grid2D grid_;
  Kernel kernel_;
  PhysicsParams physics_;
  TimeScheme scheme_;
  ScalarField a_plus_s_;
  ShiftedNeumannSolver ch_;
  NeumannPoissonSolver pressure_;
};

std::vector<DiagnosticsRow> diagnostics(const ForwardSolver& solver, const StateTrajectory& traj);

/// Zero control series with nt slots.
VectorSeries zero_control(const Grid2D& g, int nt);

}  // namespace nchns
