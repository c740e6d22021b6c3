#pragma once

// Linearization of the discrete state step around a stored trajectory. Every
// term of ForwardSolver's update is differentiated at the time level the
// forward step evaluates it, so run_tangent is the exact derivative of
// ForwardSolver::run with respect to the control.

#include "nchns/forward.hpp"

namespace nchns {

struct TangentTrajectory {
  VectorSeries xi;   // levels 0..nt, xi[0] = 0
  ScalarSeries eta;  // levels 0..nt, eta[0] = 0
  ScalarSeries pi;   // linearized pressure, pi[0] = 0

  int nt() const { return static_cast<int>(xi.size()) - 1; }
};

struct TangentStep {
  VectorField xi;
  ScalarField eta;
  ScalarField pi;
};

/// One linearized step n -> n+1 around traj (uses levels n and n+1).
TangentStep step_tangent(const ForwardSolver& solver, const StateTrajectory& traj, int n,
                         const VectorField& xi, const ScalarField& eta, const VectorField& h);

/// h has nt entries.
TangentTrajectory run_tangent(const ForwardSolver& solver, const StateTrajectory& traj, const VectorSeries& h);

}  // namespace nchns
