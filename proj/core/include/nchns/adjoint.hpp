#pragma once

// Backward sweeps producing the adjoint pair (p, q).
//
// Two schemes are provided:
//   discrete    the exact transpose of run_tangent. Pairings with the tangent
//               agree to round-off, so gradients pass Taylor tests at any
//               resolution. Default for optimization.
//   continuous  the adjoint PDE system discretized directly with the forward
//               stencils (explicit viscous p-step plus projection,
//               semi-implicit q-step with (a + F''(phi)) Delta implicit).
//               It agrees with the discrete one only up to truncation error.
//
// Both store p and q as L2 densities at levels 0..nt, with terminal values
// p(T) = P[beta3 (u(T) - u_Omega)], q(T) = beta4 (phi(T) - phi_Omega).

#include <string>

#include "nchns/control.hpp"
#include "nchns/forward.hpp"

namespace nchns {

enum class AdjointScheme { discrete, continuous };

std::string to_string(AdjointScheme s);
AdjointScheme adjoint_scheme_from_string(const std::string& s);

struct AdjointTrajectory {
  VectorSeries p;   // levels 0..nt
  ScalarSeries q;   // levels 0..nt
  ScalarSeries pi;  // adjoint pressure realized by the projection
  AdjointScheme scheme = AdjointScheme::discrete;

  int nt() const { return static_cast<int>(p.size()) - 1; }
};

AdjointTrajectory run_adjoint(const ForwardSolver& solver, const StateTrajectory& traj, const Targets& targets,
                              const CostWeights& w, AdjointScheme scheme = AdjointScheme::discrete);

/// L2(Q) representation of the reduced gradient: slot k is gamma v_k + p_{k+1}.
VectorSeries reduced_gradient(const VectorSeries& v, const AdjointTrajectory& adj, double gamma);

}  // namespace nchns
