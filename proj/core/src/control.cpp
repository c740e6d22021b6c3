#include "nchns/control.hpp"

#include <cmath>
#include <sstream>

#include "nchns/error.hpp"
#include "nchns/operators.hpp"

namespace nchns {

void CostWeights::validate() const {
  if (beta1 < 0 || beta2 < 0 || beta3 < 0 || beta4 < 0 || gamma < 0) {
    throw HypothesisViolation("weights must be nonnegative");
  }
  if (beta1 == 0 && beta2 == 0 && beta3 == 0 && beta4 == 0 && gamma == 0) {
    throw HypothesisViolation("weights: beta1..beta4 and gamma vanish simultaneously");
  }
}

Targets Targets::zeros(const Grid2D& g, int nt) {
  Targets t;
  t.u_Q.assign(static_cast<std::size_t>(nt) + 1, VectorField(g));
  t.phi_Q.assign(static_cast<std::size_t>(nt) + 1, ScalarField(g));
  t.u_Omega = VectorField(g);
  t.phi_Omega = ScalarField(g);
  return t;
}

Targets Targets::from_trajectory(const StateTrajectory& traj) {
  Targets t;
  t.u_Q = traj.u;
  t.phi_Q = traj.phi;
  t.u_Omega = traj.u.back();
  t.phi_Omega = traj.phi.back();
  return t;
}

void Targets::validate(const Grid2D& g, int nt, double tol) const {
  const auto n = static_cast<std::size_t>(nt) + 1;
  if (u_Q.size() != n || phi_Q.size() != n) throw GridMismatch("targets: need nt + 1 levels");
  for (std::size_t k = 0; k < n; ++k) {
    require_same_grid(g, u_Q[k].grid, "targets u_Q");
    require_same_grid(g, phi_Q[k].grid, "targets phi_Q");
  }
  require_same_grid(g, u_Omega.grid, "targets u_Omega");
  require_same_grid(g, phi_Omega.grid, "targets phi_Omega");
  auto check = [&](const VectorField& u, const char* what) {
    const double d = max_abs(divergence_face_to_cc(u));
    if (d > tol || u.max_boundary_normal() != 0.0) {
      std::ostringstream os;
      os << what << " not divergence-free (max |div| = " << d << ")";
      throw HypothesisViolation(os.str());
    }
  };
  for (std::size_t k = 1; k < n; ++k) check(u_Q[k], "target u_Q");
  check(u_Omega, "target u_Omega");
}

ControlBounds ControlBounds::constant(const Grid2D& g, int nt, double lo, double hi) {
  ControlBounds b;
  b.lower.assign(static_cast<std::size_t>(nt), VectorField(g, lo));
  b.upper.assign(static_cast<std::size_t>(nt), VectorField(g, hi));
  return b;
}

void ControlBounds::validate() const {
  if (lower.size() != upper.size()) throw GridMismatch("bounds: lower and upper differ in length");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    require_same_grid(lower[k].grid, upper[k].grid, "bounds");
    for (std::size_t i = 0; i < lower[k].ux.size(); ++i)
      if (lower[k].ux[i] > upper[k].ux[i]) throw HypothesisViolation("bounds: lower > upper");
    for (std::size_t i = 0; i < lower[k].uy.size(); ++i)
      if (lower[k].uy[i] > upper[k].uy[i]) throw HypothesisViolation("bounds: lower > upper");
  }
}

double inner_product_lq(const VectorSeries& a, const VectorSeries& b, double dt) {
  if (a.size() != b.size()) throw GridMismatch("inner_product_lq: series lengths differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += inner_product_l2(a[k], b[k]);
  return s * dt;
}

double norm_lq(const VectorSeries& a, double dt) { return std::sqrt(inner_product_lq(a, a, dt)); }

void axpy(VectorSeries& a, double s, const VectorSeries& b) {
  if (a.size() != b.size()) throw GridMismatch("axpy: series lengths differ");
  for (std::size_t k = 0; k < a.size(); ++k) a[k].axpy(s, b[k]);
}

double evaluate_cost(const StateTrajectory& traj, const VectorSeries& v, const Targets& targets,
                     const CostWeights& w, double dt) {
  const int nt = traj.nt();
  if (static_cast<int>(v.size()) != nt) throw GridMismatch("evaluate_cost: control length != nt");
  if (static_cast<int>(targets.u_Q.size()) != nt + 1 || static_cast<int>(targets.phi_Q.size()) != nt + 1) {
    throw GridMismatch("evaluate_cost: target length != nt + 1");
  }
  double track_u = 0.0, track_phi = 0.0;
  for (int k = 1; k <= nt; ++k) {
    if (w.beta1 != 0.0) {
      const VectorField d = traj.u[k] - targets.u_Q[k];
      track_u += inner_product_l2(d, d);
    }
    if (w.beta2 != 0.0) {
      const ScalarField d = traj.phi[k] - targets.phi_Q[k];
      track_phi += inner_product_l2(d, d);
    }
  }
  double J = 0.5 * w.beta1 * dt * track_u + 0.5 * w.beta2 * dt * track_phi;
  if (w.beta3 != 0.0) {
    const VectorField d = traj.u[nt] - targets.u_Omega;
    J += 0.5 * w.beta3 * inner_product_l2(d, d);
  }
  if (w.beta4 != 0.0) {
    const ScalarField d = traj.phi[nt] - targets.phi_Omega;
    J += 0.5 * w.beta4 * inner_product_l2(d, d);
  }
  if (w.gamma != 0.0) J += 0.5 * w.gamma * inner_product_lq(v, v, dt);
  return J;
}

StateCostGradient cost_state_gradient(const StateTrajectory& traj, const Targets& targets,
                                      const CostWeights& w, double dt) {
  const int nt = traj.nt();
  const Grid2D& g = traj.phi[0].grid;
  const VectorField fw = face_weights(g);
  const double cv = g.cell_volume();

  StateCostGradient s;
  s.du.assign(static_cast<std::size_t>(nt) + 1, VectorField(g));
  s.dphi.assign(static_cast<std::size_t>(nt) + 1, ScalarField(g));

  auto add_u = [&](VectorField& out, const VectorField& d, double c) {
    for (std::size_t i = 0; i < d.ux.size(); ++i) out.ux[i] += c * fw.ux[i] * d.ux[i];
    for (std::size_t i = 0; i < d.uy.size(); ++i) out.uy[i] += c * fw.uy[i] * d.uy[i];
  };
  for (int k = 1; k <= nt; ++k) {
    if (w.beta1 != 0.0) add_u(s.du[k], traj.u[k] - targets.u_Q[k], w.beta1 * dt);
    if (w.beta2 != 0.0) s.dphi[k].axpy(w.beta2 * dt * cv, traj.phi[k] - targets.phi_Q[k]);
  }
  if (w.beta3 != 0.0) add_u(s.du[nt], traj.u[nt] - targets.u_Omega, w.beta3);
  if (w.beta4 != 0.0) s.dphi[nt].axpy(w.beta4 * cv, traj.phi[nt] - targets.phi_Omega);
  return s;
}

}  // namespace nchns
