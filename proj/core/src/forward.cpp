#include "nchns/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nchns/error.hpp"
#include "nchns/operators.hpp"

namespace nchns {

namespace {

ScalarField divide(const ScalarField& a, const ScalarField& b) {
  ScalarField r(a.grid);
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = a.values[k] / b.values[k];
  return r;
}

ScalarField reciprocal(const ScalarField& a) {
  ScalarField r(a.grid);
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = 1.0 / a.values[k];
  return r;
}

}  // namespace

ForwardSolver::ForwardSolver(const Grid2D& g, Kernel kernel, PhysicsParams physics, TimeScheme scheme)
    : grid_(g), kernel_(std::move(kernel)), physics_(physics), scheme_(scheme),
      a_plus_s_(kernel_.a_field()), ch_(g, scheme.dt > 0 ? scheme.dt : 1.0), pressure_(g) {
  require_same_grid(g, kernel_.grid(), "ForwardSolver");
  if (!(scheme_.dt > 0.0)) throw Error("time scheme: dt must be positive");
  if (scheme_.nt < 1) throw Error("time scheme: nt must be >= 1");
  if (!(scheme_.stabilization >= 0.0)) throw Error("time scheme: stabilization must be >= 0");
  for (auto& x : a_plus_s_.values) x += scheme_.stabilization;
  if (*std::min_element(a_plus_s_.values.begin(), a_plus_s_.values.end()) <= 0.0) {
    throw HypothesisViolation("a + s must be positive for the implicit CH step");
  }
  ch_.factorize(reciprocal(a_plus_s_));
}

ScalarField ForwardSolver::ch_solve(const ScalarField& rhs) const {
  return divide(ch_.solve(rhs), a_plus_s_);
}

ScalarField ForwardSolver::ch_solve_t(const ScalarField& x) const {
  return ch_.solve(divide(x, a_plus_s_));
}

VectorField ForwardSolver::project(const VectorField& w, ScalarField* pressure) const {
  VectorField m = w;
  m.zero_boundary_normal();
  const ScalarField x = pressure_.solve(divergence_face_to_cc(m));
  m += gradient_cc_to_face(x);
  if (pressure) *pressure = (-1.0 / scheme_.dt) * x;
  return m;
}

ForwardSolver::ChState ForwardSolver::step_ch(const ScalarField& phi, const VectorField& u) const {
  const Potential& f = physics_.potential;
  const double dt = scheme_.dt;
  const double s = scheme_.stabilization;

  ScalarField w = f.d1(phi);
  w -= convolve(kernel_, phi);
  w.axpy(-s, phi);

  ScalarField rhs = phi;
  rhs.axpy(-dt, advect_scalar(u, phi));
  rhs.axpy(dt, laplacian_neumann(w));

  ChState out;
  out.phi = ch_solve(rhs);
  out.mu = chemical_potential(out.phi, kernel_, f);
  return out;
}

ForwardSolver::NsState ForwardSolver::step_ns(const VectorField& u, const ScalarField& phi1,
                                              const ScalarField& mu1, const VectorField& v) const {
  const double dt = scheme_.dt;
  VectorField rate = div_viscous_stress(physics_.viscosity.nu(phi1), u);
  rate -= advect_vector(u, u);
  rate += kelvin_force(mu1, phi1);
  rate += v;
  VectorField ustar = u;
  ustar.axpy(dt, rate);

  NsState out;
  out.u = project(ustar, &out.pi);
  return out;
}

double ForwardSolver::stable_dt(const VectorField& u) const {
  const double h = std::min(grid_.dx(), grid_.dy());
  const double diffusive = h * h / (8.0 * physics_.viscosity.upper);
  const double advective = h / (4.0 * max_abs(u) + 1e-12);
  return std::min(diffusive, advective);
}

void ForwardSolver::check_cfl(const VectorField& u, int step) const {
  if (!scheme_.enforce_cfl) return;
  const double lim = stable_dt(u);
  if (scheme_.dt > lim) {
    std::ostringstream os;
    os << "CFL violated at step " << step << ": dt = " << scheme_.dt << " > " << lim;
    throw CflViolation(os.str(), lim, step);
  }
}

void ForwardSolver::validate_initial_data(const InitialData& init) const {
  require_same_grid(grid_, init.u0.grid, "initial velocity");
  require_same_grid(grid_, init.phi0.grid, "initial phase field");
  if (!all_finite(init.u0) || !all_finite(init.phi0)) throw HypothesisViolation("initial data not finite");
  if (init.u0.max_boundary_normal() != 0.0) {
    throw HypothesisViolation("initial velocity violates no-slip on boundary-normal faces");
  }
  const double div = max_abs(divergence_face_to_cc(init.u0));
  if (div > scheme_.tol_p) {
    std::ostringstream os;
    os << "initial velocity not divergence-free: max |div u0| = " << div;
    throw HypothesisViolation(os.str());
  }
}

StateTrajectory ForwardSolver::run(const VectorSeries& v, const InitialData& init) const {
  const int nt = scheme_.nt;
  if (static_cast<int>(v.size()) != nt) throw Error("run_forward: control must have nt entries");
  validate_initial_data(init);

  StateTrajectory tr;
  tr.times.resize(nt + 1);
  tr.u.reserve(nt + 1);
  tr.phi.reserve(nt + 1);
  tr.mu.reserve(nt + 1);
  tr.pi.reserve(nt + 1);
  tr.times[0] = 0.0;
  tr.u.push_back(init.u0);
  tr.phi.push_back(init.phi0);
  tr.mu.push_back(chemical_potential(init.phi0, kernel_, physics_.potential));
  tr.pi.emplace_back(grid_);

  for (int n = 0; n < nt; ++n) {
    try {
      check_cfl(tr.u[n], n);
      ChState ch = step_ch(tr.phi[n], tr.u[n]);
      NsState ns = step_ns(tr.u[n], ch.phi, ch.mu, v[n]);
      if (!all_finite(ns.u) || !all_finite(ch.phi)) throw SolverFailure("non-finite state", n);
      tr.phi.push_back(std::move(ch.phi));
      tr.mu.push_back(std::move(ch.mu));
      tr.u.push_back(std::move(ns.u));
      tr.pi.push_back(std::move(ns.pi));
      tr.times[n + 1] = (n + 1) * scheme_.dt;
    } catch (const SolverFailure& e) {
      if (e.step() >= 0) throw;
      throw SolverFailure(std::string(e.what()) + " (step " + std::to_string(n) + ")", n, e.residual());
    }
  }
  return tr;
}

std::vector<DiagnosticsRow> diagnostics(const ForwardSolver& solver, const StateTrajectory& traj) {
  std::vector<DiagnosticsRow> rows;
  rows.reserve(traj.u.size());
  for (std::size_t k = 0; k < traj.u.size(); ++k) {
    const ScalarField& phi = traj.phi[k];
    DiagnosticsRow r;
    r.step = static_cast<int>(k);
    r.time = traj.times[k];
    r.mass = integral(phi);
    r.kinetic_energy = 0.5 * inner_product_l2(traj.u[k], traj.u[k]);
    r.free_energy = free_energy(phi, solver.kernel(), solver.physics().potential);
    r.max_div = max_abs(divergence_face_to_cc(traj.u[k]));
    r.max_u = max_abs(traj.u[k]);
    r.min_phi = *std::min_element(phi.values.begin(), phi.values.end());
    r.max_phi = *std::max_element(phi.values.begin(), phi.values.end());
    rows.push_back(r);
  }
  return rows;
}

VectorSeries zero_control(const Grid2D& g, int nt) { return VectorSeries(static_cast<std::size_t>(nt), VectorField(g)); }

}  // namespace nchns
