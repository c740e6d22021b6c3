#include "nchns/adjoint.hpp"

#include "nchns/error.hpp"
#include "nchns/linear_solvers.hpp"
#include "nchns/operators.hpp"

namespace nchns {

std::string to_string(AdjointScheme s) { return s == AdjointScheme::discrete ? "discrete" : "continuous"; }

AdjointScheme adjoint_scheme_from_string(const std::string& s) {
  if (s == "discrete") return AdjointScheme::discrete;
  if (s == "continuous") return AdjointScheme::continuous;
  throw Error("unknown adjoint scheme '" + s + "' (expected discrete or continuous)");
}

namespace {

void check_inputs(const ForwardSolver& solver, const StateTrajectory& traj, const Targets& targets,
                  const CostWeights& w) {
  w.validate();
  if (traj.nt() != solver.scheme().nt) throw Error("run_adjoint: trajectory length differs from scheme");
  targets.validate(solver.grid(), traj.nt(), std::max(solver.scheme().tol_p, 1e-8));
}

// Transposed sweep of the discrete step. lam_u / lam_phi are Euclidean
// adjoints of the stored arrays; the densities p = lam_u / |cell|,
// q = lam_phi / |cell| are what gets stored.
AdjointTrajectory discrete_sweep(const ForwardSolver& solver, const StateTrajectory& traj, const Targets& targets,
                                 const CostWeights& w) {
  const int nt = traj.nt();
  const Grid2D& g = solver.grid();
  const Kernel& K = solver.kernel();
  const Potential& f = solver.physics().potential;
  const Viscosity& visc = solver.physics().viscosity;
  const double dt = solver.scheme().dt;
  const double s = solver.scheme().stabilization;
  const double inv_cv = 1.0 / g.cell_volume();

  const StateCostGradient seed = cost_state_gradient(traj, targets, w, dt);

  AdjointTrajectory adj;
  adj.scheme = AdjointScheme::discrete;
  adj.p.assign(nt + 1, VectorField(g));
  adj.q.assign(nt + 1, ScalarField(g));
  adj.pi.assign(nt + 1, ScalarField(g));

  VectorField lam_u = seed.du[nt];
  ScalarField lam_phi = seed.dphi[nt];
  adj.p[nt] = inv_cv * solver.project(lam_u, &adj.pi[nt]);
  adj.q[nt] = inv_cv * lam_phi;

  for (int n = nt - 1; n >= 0; --n) {
    const VectorField& u = traj.u[n];
    const ScalarField& phi = traj.phi[n];
    const ScalarField& phi1 = traj.phi[n + 1];
    const ScalarField& mu1 = traj.mu[n + 1];

    // Navier-Stokes part: lam_star = P^T lam_u' = P lam_u'.
    const VectorField lam_star = solver.project(lam_u);

    VectorField next_u = seed.du[n];
    next_u += lam_star;
    VectorField rate = div_viscous_stress(visc.nu(phi1), lam_star);
    rate -= advect_vector_t_u(u, lam_star);
    rate -= advect_vector_t_w(u, lam_star);
    next_u.axpy(dt, rate);

    ScalarField lam_phi1 = lam_phi;
    lam_phi1.axpy(dt, hadamard(visc.d1(phi1), viscous_stress_nu_contraction(u, lam_star)));
    lam_phi1.axpy(dt, kelvin_force_t_phi(mu1, lam_star));
    const ScalarField lam_mu1 = dt * kelvin_force_t_mu(phi1, lam_star);
    lam_phi1 += hadamard(K.a_field(), lam_mu1);
    lam_phi1 -= convolve(K, lam_mu1);
    lam_phi1 += hadamard(f.d2(phi1), lam_mu1);

    // Cahn-Hilliard part.
    const ScalarField lam_rhs = solver.ch_solve_t(lam_phi1);
    const ScalarField lam_w = dt * laplacian_neumann(lam_rhs);

    ScalarField next_phi = seed.dphi[n];
    next_phi += lam_rhs;
    next_phi += hadamard(f.d2(phi), lam_w);
    next_phi -= convolve(K, lam_w);
    next_phi.axpy(-s, lam_w);
    next_phi.axpy(-dt, advect_scalar_t_phi(u, lam_rhs));
    next_u.axpy(-dt, advect_scalar_t_u(phi, lam_rhs));

    lam_u = std::move(next_u);
    lam_phi = std::move(next_phi);
    adj.p[n] = inv_cv * solver.project(lam_u, &adj.pi[n]);
    adj.q[n] = inv_cv * lam_phi;
  }
  return adj;
}

AdjointTrajectory continuous_sweep(const ForwardSolver& solver, const StateTrajectory& traj, const Targets& targets,
                                   const CostWeights& w) {
  const int nt = traj.nt();
  const Grid2D& g = solver.grid();
  const Kernel& K = solver.kernel();
  const Potential& f = solver.physics().potential;
  const Viscosity& visc = solver.physics().viscosity;
  const double dt = solver.scheme().dt;

  AdjointTrajectory adj;
  adj.scheme = AdjointScheme::continuous;
  adj.p.assign(nt + 1, VectorField(g));
  adj.q.assign(nt + 1, ScalarField(g));
  adj.pi.assign(nt + 1, ScalarField(g));

  adj.p[nt] = solver.project(w.beta3 * (traj.u[nt] - targets.u_Omega), &adj.pi[nt]);
  adj.q[nt] = w.beta4 * (traj.phi[nt] - targets.phi_Omega);

  ShiftedNeumannSolver implicit(g, dt);

  for (int k = nt - 1; k >= 0; --k) {
    solver.check_cfl(traj.u[k], k);
    const VectorField& ub = traj.u[k];
    const ScalarField& phib = traj.phi[k];
    const ScalarField& mub = traj.mu[k];
    const VectorField& p = adj.p[k + 1];
    const ScalarField& q = adj.q[k + 1];

    VectorField prate = div_viscous_stress(visc.nu(phib), p);
    prate += advect_vector(ub, p);
    prate -= transpose_gradient_contraction(p, ub);
    prate -= kelvin_force(q, phib);
    if (w.beta1 != 0.0) prate.axpy(w.beta1, ub - targets.u_Q[k]);
    VectorField pstar = p;
    pstar.axpy(dt, prate);
    adj.p[k] = solver.project(pstar, &adj.pi[k]);

    const ScalarField pgrad_phi = face_dot_to_cell(p, gradient_cc_to_face(phib));
    ScalarField qrate = advect_scalar(ub, q);
    qrate -= grad_dot_convolve(K, q);
    qrate -= 2.0 * hadamard(visc.d1(phib), double_dot(sym_gradient(ub), sym_gradient(p)));
    qrate += hadamard(K.a_field() + f.d2(phib), pgrad_phi);
    qrate -= convolve(K, pgrad_phi);
    qrate -= face_dot_to_cell(p, gradient_cc_to_face(mub));
    if (w.beta2 != 0.0) qrate.axpy(w.beta2, phib - targets.phi_Q[k]);
    ScalarField explicit_part = q;
    explicit_part.axpy(dt, qrate);

    // (1/A - dt L) q = explicit / A with A = a + F''(phi) >= c1 > 0.
    const ScalarField A = K.a_field() + f.d2(phib);
    ScalarField inv_a(g);
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (!(A.values[i] > 0.0)) {
        throw HypothesisViolation("continuous adjoint: a + F''(phi) not positive at step " + std::to_string(k));
      }
      inv_a.values[i] = 1.0 / A.values[i];
    }
    implicit.factorize(inv_a);
    adj.q[k] = implicit.solve(hadamard(inv_a, explicit_part));
  }
  return adj;
}

}  // namespace

AdjointTrajectory run_adjoint(const ForwardSolver& solver, const StateTrajectory& traj, const Targets& targets,
                              const CostWeights& w, AdjointScheme scheme) {
  check_inputs(solver, traj, targets, w);
  try {
    return scheme == AdjointScheme::discrete ? discrete_sweep(solver, traj, targets, w)
                                             : continuous_sweep(solver, traj, targets, w);
  } catch (const SolverFailure& e) {
    throw SolverFailure(std::string("adjoint: ") + e.what(), e.step(), e.residual());
  }
}

VectorSeries reduced_gradient(const VectorSeries& v, const AdjointTrajectory& adj, double gamma) {
  if (static_cast<int>(v.size()) != adj.nt()) throw Error("reduced_gradient: control/adjoint length mismatch");
  VectorSeries g(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    g[k] = adj.p[k + 1];
    g[k].axpy(gamma, v[k]);
  }
  return g;
}

}  // namespace nchns
