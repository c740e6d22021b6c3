#include "nchns/tangent.hpp"

#include "nchns/error.hpp"
#include "nchns/operators.hpp"

namespace nchns {

TangentStep step_tangent(const ForwardSolver& solver, const StateTrajectory& traj, int n,
                         const VectorField& xi, const ScalarField& eta, const VectorField& h) {
  if (n < 0 || n >= traj.nt()) throw Error("step_tangent: step index out of range");
  const Kernel& K = solver.kernel();
  const Potential& f = solver.physics().potential;
  const Viscosity& visc = solver.physics().viscosity;
  const double dt = solver.scheme().dt;
  const double s = solver.scheme().stabilization;

  const VectorField& u = traj.u[n];
  const ScalarField& phi = traj.phi[n];
  const ScalarField& phi1 = traj.phi[n + 1];
  const ScalarField& mu1 = traj.mu[n + 1];

  // Cahn-Hilliard part.
  ScalarField dw = hadamard(f.d2(phi), eta);
  dw -= convolve(K, eta);
  dw.axpy(-s, eta);

  ScalarField drhs = eta;
  drhs.axpy(-dt, advect_scalar(xi, phi));
  drhs.axpy(-dt, advect_scalar(u, eta));
  drhs.axpy(dt, laplacian_neumann(dw));

  TangentStep out;
  out.eta = solver.ch_solve(drhs);

  ScalarField dmu = hadamard(K.a_field(), out.eta);
  dmu -= convolve(K, out.eta);
  dmu += hadamard(f.d2(phi1), out.eta);

  // Navier-Stokes part.
  VectorField rate = div_viscous_stress(visc.nu(phi1), xi);
  rate += div_viscous_stress_dnu(hadamard(visc.d1(phi1), out.eta), u);
  rate -= advect_vector(xi, u);
  rate -= advect_vector(u, xi);
  rate += kelvin_force(dmu, phi1);
  rate += kelvin_force(mu1, out.eta);
  rate += h;
  VectorField dstar = xi;
  dstar.axpy(dt, rate);
  out.xi = solver.project(dstar, &out.pi);
  return out;
}

TangentTrajectory run_tangent(const ForwardSolver& solver, const StateTrajectory& traj, const VectorSeries& h) {
  const int nt = traj.nt();
  if (static_cast<int>(h.size()) != nt) throw Error("run_tangent: direction must have nt entries");
  const Grid2D& g = solver.grid();
  TangentTrajectory t;
  t.xi.reserve(nt + 1);
  t.eta.reserve(nt + 1);
  t.pi.reserve(nt + 1);
  t.xi.emplace_back(g);
  t.eta.emplace_back(g);
  t.pi.emplace_back(g);
  for (int n = 0; n < nt; ++n) {
    try {
      TangentStep st = step_tangent(solver, traj, n, t.xi[n], t.eta[n], h[n]);
      t.xi.push_back(std::move(st.xi));
      t.eta.push_back(std::move(st.eta));
      t.pi.push_back(std::move(st.pi));
    } catch (const SolverFailure& e) {
      if (e.step() >= 0) throw;
      throw SolverFailure(std::string(e.what()) + " (tangent step " + std::to_string(n) + ")", n);
    }
  }
  return t;
}

}  // namespace nchns
