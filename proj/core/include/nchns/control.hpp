#pragma once

// Tracking cost, targets, weights, and box bounds of the control problem.
//
// Time quadrature matches the scheme: controls are piecewise constant on the
// nt step slots, tracking terms use the right endpoint of each slot
// (levels 1..nt), terminal terms use level nt.

#include <vector>

#include "nchns/forward.hpp"
#include "nchns/grid.hpp"

namespace nchns {

struct CostWeights {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
  double gamma = 1e-3;

  /// Throws HypothesisViolation on negative weights or when all vanish.
  void validate() const;
};

struct Targets {
  VectorSeries u_Q;     // nt + 1 levels (level 0 unused by the cost)
  ScalarSeries phi_Q;   // nt + 1 levels
  VectorField u_Omega;
  ScalarField phi_Omega;

  static Targets zeros(const Grid2D& g, int nt);
  /// Targets that a given trajectory matches exactly.
  static Targets from_trajectory(const StateTrajectory& traj);

  /// Shape checks, and divergence of velocity targets against tol.
  void validate(const Grid2D& g, int nt, double tol) const;
};

struct ControlBounds {
  VectorSeries lower;  // nt slots
  VectorSeries upper;

  static ControlBounds constant(const Grid2D& g, int nt, double lo, double hi);
  /// Throws HypothesisViolation if lower > upper anywhere.
  void validate() const;
};

/// sum_k dt (a_k, b_k) over the control slots.
double inner_product_lq(const VectorSeries& a, const VectorSeries& b, double dt);
double norm_lq(const VectorSeries& a, double dt);
/// a += s * b, slot-wise.
void axpy(VectorSeries& a, double s, const VectorSeries& b);

double evaluate_cost(const StateTrajectory& traj, const VectorSeries& v, const Targets& targets,
                     const CostWeights& w, double dt);

/// Euclidean gradient of the state part of J with respect to the stored
/// arrays u_k, phi_k (levels 0..nt; level 0 is zero).
struct StateCostGradient {
  VectorSeries du;
  ScalarSeries dphi;
};
StateCostGradient cost_state_gradient(const StateTrajectory& traj, const Targets& targets,
                                      const CostWeights& w, double dt);

}  // namespace nchns
