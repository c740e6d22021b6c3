#include "nchns/operators.hpp"

#include <algorithm>
#include <cmath>

#include "nchns/error.hpp"
#include "nchns/stencil.hpp"

namespace nchns {

namespace st = stencil;

namespace {

ScalarField wrap(const Grid2D& g, st::Vec v) {
  ScalarField f;
  f.grid = g;
  f.values = std::move(v);
  return f;
}

VectorField wrap(const Grid2D& g, st::Vec x, st::Vec y) {
  VectorField f;
  f.grid = g;
  f.ux = std::move(x);
  f.uy = std::move(y);
  return f;
}

VectorField masked(const VectorField& w) {
  VectorField m = w;
  m.zero_boundary_normal();
  return m;
}

st::Vec scaled(st::Vec v, double s) {
  for (auto& x : v) x *= s;
  return v;
}

// Symmetric-gradient off-diagonal at nodes.
st::Vec shear_rate_nodes(const VectorField& u) {
  const Grid2D& g = u.grid;
  st::Vec d = st::xnode_dy(g, u.ux);
  st::add_to(d, st::ynode_dx(g, u.uy));
  for (auto& x : d) x *= 0.5;
  return d;
}

}  // namespace

VectorField gradient_cc_to_face(const ScalarField& phi) {
  const Grid2D& g = phi.grid;
  return wrap(g, st::grad_x(g, phi.values), st::grad_y(g, phi.values));
}

ScalarField gradient_t(const VectorField& w) {
  const Grid2D& g = w.grid;
  st::Vec r = st::grad_x_t(g, w.ux);
  st::add_to(r, st::grad_y_t(g, w.uy));
  return wrap(g, std::move(r));
}

ScalarField divergence_face_to_cc(const VectorField& w) {
  const Grid2D& g = w.grid;
  st::Vec r = st::diff_x(g, w.ux);
  st::add_to(r, st::diff_y(g, w.uy));
  return wrap(g, std::move(r));
}

ScalarField laplacian_neumann(const ScalarField& phi) {
  return divergence_face_to_cc(gradient_cc_to_face(phi));
}

TensorField sym_gradient(const VectorField& u_in) {
  const VectorField u = masked(u_in);
  const Grid2D& g = u.grid;
  TensorField t(g);
  t.xx = st::diff_x(g, u.ux);
  t.yy = st::diff_y(g, u.uy);
  t.xy = st::node_to_cell(g, shear_rate_nodes(u));
  t.yx = t.xy;
  return t;
}

ScalarField double_dot(const TensorField& a, const TensorField& b) {
  require_same_grid(a.grid, b.grid, "double_dot");
  ScalarField r(a.grid);
  for (std::size_t k = 0; k < r.size(); ++k) {
    r.values[k] = a.xx[k] * b.xx[k] + a.xy[k] * b.xy[k] + a.yx[k] * b.yx[k] + a.yy[k] * b.yy[k];
  }
  return r;
}

namespace {

VectorField viscous_stress_unchecked(const ScalarField& nu, const VectorField& u_in) {
  const VectorField u = masked(u_in);
  const Grid2D& g = u.grid;

  st::Vec s11 = scaled(st::mul(nu.values, st::diff_x(g, u.ux)), 2.0);
  st::Vec s22 = scaled(st::mul(nu.values, st::diff_y(g, u.uy)), 2.0);
  st::Vec s12 = scaled(st::mul(st::cell_to_node(g, nu.values), shear_rate_nodes(u)), 2.0);

  st::Vec ox = st::grad_x(g, s11);
  st::add_to(ox, st::node_dy_to_x(g, s12));
  st::Vec oy = st::grad_y(g, s22);
  st::add_to(oy, st::node_dx_to_y(g, s12));
  VectorField out = wrap(g, std::move(ox), std::move(oy));
  out.zero_boundary_normal();
  return out;
}

}  // namespace

VectorField div_viscous_stress(const ScalarField& nu, const VectorField& u_in) {
  require_same_grid(nu.grid, u_in.grid, "div_viscous_stress");
  if (*std::min_element(nu.values.begin(), nu.values.end()) <= 0.0) {
    throw HypothesisViolation("div_viscous_stress: viscosity must be positive");
  }
  return viscous_stress_unchecked(nu, u_in);
}

VectorField div_viscous_stress_dnu(const ScalarField& dnu, const VectorField& u) {
  require_same_grid(dnu.grid, u.grid, "div_viscous_stress_dnu");
  return viscous_stress_unchecked(dnu, u);
}

ScalarField viscous_stress_nu_contraction(const VectorField& u_in, const VectorField& lambda_in) {
  require_same_grid(u_in.grid, lambda_in.grid, "viscous_stress_nu_contraction");
  const VectorField u = masked(u_in);
  const VectorField lam = masked(lambda_in);
  const Grid2D& g = u.grid;

  st::Vec r = scaled(st::mul(st::diff_x(g, u.ux), st::grad_x_t(g, lam.ux)), 2.0);
  st::add_to(r, st::mul(st::diff_y(g, u.uy), st::grad_y_t(g, lam.uy)), 2.0);

  st::Vec nodal = st::node_dy_to_x_t(g, lam.ux);
  st::add_to(nodal, st::node_dx_to_y_t(g, lam.uy));
  nodal = scaled(st::mul(shear_rate_nodes(u), nodal), 2.0);
  st::add_to(r, st::cell_to_node_t(g, nodal));
  return wrap(g, std::move(r));
}

ScalarField advect_scalar(const VectorField& u, const ScalarField& phi) {
  require_same_grid(u.grid, phi.grid, "advect_scalar");
  const Grid2D& g = u.grid;
  st::Vec r = st::diff_x(g, st::mul(u.ux, st::avg_x(g, phi.values)));
  st::add_to(r, st::diff_y(g, st::mul(u.uy, st::avg_y(g, phi.values))));
  return wrap(g, std::move(r));
}

VectorField advect_scalar_t_u(const ScalarField& phi, const ScalarField& lambda) {
  require_same_grid(phi.grid, lambda.grid, "advect_scalar_t_u");
  const Grid2D& g = phi.grid;
  VectorField r = wrap(g, st::mul(st::avg_x(g, phi.values), st::diff_x_t(g, lambda.values)),
                       st::mul(st::avg_y(g, phi.values), st::diff_y_t(g, lambda.values)));
  r.zero_boundary_normal();
  return r;
}

ScalarField advect_scalar_t_phi(const VectorField& u, const ScalarField& lambda) {
  require_same_grid(u.grid, lambda.grid, "advect_scalar_t_phi");
  const Grid2D& g = u.grid;
  st::Vec r = st::avg_x_t(g, st::mul(u.ux, st::diff_x_t(g, lambda.values)));
  st::add_to(r, st::avg_y_t(g, st::mul(u.uy, st::diff_y_t(g, lambda.values))));
  return wrap(g, std::move(r));
}

VectorField advect_vector(const VectorField& u_in, const VectorField& w_in) {
  require_same_grid(u_in.grid, w_in.grid, "advect_vector");
  const VectorField u = masked(u_in);
  const VectorField w = masked(w_in);
  const Grid2D& g = u.grid;

  st::Vec ox = st::grad_x(g, st::mul(st::mean_x(g, u.ux), st::mean_x(g, w.ux)));
  st::add_to(ox, st::node_dy_to_x(g, st::mul(st::ynode_avg(g, u.uy), st::xnode_avg(g, w.ux))));
  st::Vec oy = st::grad_y(g, st::mul(st::mean_y(g, u.uy), st::mean_y(g, w.uy)));
  st::add_to(oy, st::node_dx_to_y(g, st::mul(st::xnode_avg(g, u.ux), st::ynode_avg(g, w.uy))));
  VectorField out = wrap(g, std::move(ox), std::move(oy));
  out.zero_boundary_normal();
  return out;
}

VectorField advect_vector_t_w(const VectorField& u_in, const VectorField& lambda_in) {
  require_same_grid(u_in.grid, lambda_in.grid, "advect_vector_t_w");
  const VectorField u = masked(u_in);
  const VectorField lam = masked(lambda_in);
  const Grid2D& g = u.grid;

  st::Vec rx = st::mean_x_t(g, st::mul(st::mean_x(g, u.ux), st::grad_x_t(g, lam.ux)));
  st::add_to(rx, st::xnode_avg_t(g, st::mul(st::ynode_avg(g, u.uy), st::node_dy_to_x_t(g, lam.ux))));
  st::Vec ry = st::mean_y_t(g, st::mul(st::mean_y(g, u.uy), st::grad_y_t(g, lam.uy)));
  st::add_to(ry, st::ynode_avg_t(g, st::mul(st::xnode_avg(g, u.ux), st::node_dx_to_y_t(g, lam.uy))));
  VectorField out = wrap(g, std::move(rx), std::move(ry));
  out.zero_boundary_normal();
  return out;
}

VectorField advect_vector_t_u(const VectorField& w_in, const VectorField& lambda_in) {
  require_same_grid(w_in.grid, lambda_in.grid, "advect_vector_t_u");
  const VectorField w = masked(w_in);
  const VectorField lam = masked(lambda_in);
  const Grid2D& g = w.grid;

  st::Vec rx = st::mean_x_t(g, st::mul(st::mean_x(g, w.ux), st::grad_x_t(g, lam.ux)));
  st::add_to(rx, st::xnode_avg_t(g, st::mul(st::ynode_avg(g, w.uy), st::node_dx_to_y_t(g, lam.uy))));
  st::Vec ry = st::ynode_avg_t(g, st::mul(st::xnode_avg(g, w.ux), st::node_dy_to_x_t(g, lam.ux)));
  st::add_to(ry, st::mean_y_t(g, st::mul(st::mean_y(g, w.uy), st::grad_y_t(g, lam.uy))));
  VectorField out = wrap(g, std::move(rx), std::move(ry));
  out.zero_boundary_normal();
  return out;
}

VectorField transpose_gradient_contraction(const VectorField& p_in, const VectorField& u_in) {
  require_same_grid(p_in.grid, u_in.grid, "transpose_gradient_contraction");
  const VectorField p = masked(p_in);
  const VectorField u = masked(u_in);
  const Grid2D& g = u.grid;
  const st::Vec px = st::mean_x(g, p.ux);
  const st::Vec py = st::mean_y(g, p.uy);
  const st::Vec dxux = st::diff_x(g, u.ux);
  const st::Vec dyuy = st::diff_y(g, u.uy);
  const st::Vec dxuy = st::node_to_cell(g, st::ynode_dx(g, u.uy));
  const st::Vec dyux = st::node_to_cell(g, st::xnode_dy(g, u.ux));

  st::Vec cx = st::mul(px, dxux);
  st::add_to(cx, st::mul(py, dxuy));
  st::Vec cy = st::mul(px, dyux);
  st::add_to(cy, st::mul(py, dyuy));
  return wrap(g, st::avg_x(g, cx), st::avg_y(g, cy));
}

VectorField kelvin_force(const ScalarField& mu, const ScalarField& phi) {
  require_same_grid(mu.grid, phi.grid, "kelvin_force");
  const Grid2D& g = mu.grid;
  return wrap(g, st::mul(st::avg_x(g, mu.values), st::grad_x(g, phi.values)),
              st::mul(st::avg_y(g, mu.values), st::grad_y(g, phi.values)));
}

ScalarField kelvin_force_t_mu(const ScalarField& phi, const VectorField& lambda) {
  require_same_grid(phi.grid, lambda.grid, "kelvin_force_t_mu");
  const Grid2D& g = phi.grid;
  st::Vec r = st::avg_x_t(g, st::mul(st::grad_x(g, phi.values), lambda.ux));
  st::add_to(r, st::avg_y_t(g, st::mul(st::grad_y(g, phi.values), lambda.uy)));
  return wrap(g, std::move(r));
}

ScalarField kelvin_force_t_phi(const ScalarField& mu, const VectorField& lambda) {
  require_same_grid(mu.grid, lambda.grid, "kelvin_force_t_phi");
  const Grid2D& g = mu.grid;
  st::Vec r = st::grad_x_t(g, st::mul(st::avg_x(g, mu.values), lambda.ux));
  st::add_to(r, st::grad_y_t(g, st::mul(st::avg_y(g, mu.values), lambda.uy)));
  return wrap(g, std::move(r));
}

CellVector face_to_cell(const VectorField& w) {
  const Grid2D& g = w.grid;
  return {wrap(g, st::mean_x(g, w.ux)), wrap(g, st::mean_y(g, w.uy))};
}

ScalarField face_dot_to_cell(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "face_dot_to_cell");
  const Grid2D& g = a.grid;
  st::Vec r = st::mean_x(g, st::mul(a.ux, b.ux));
  st::add_to(r, st::mean_y(g, st::mul(a.uy, b.uy)));
  return wrap(g, std::move(r));
}

double inner_product_l2(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid, "inner_product_l2");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f.values[k] * g.values[k];
  return s * f.grid.cell_volume();
}

VectorField face_weights(const Grid2D& g) {
  VectorField w(g, g.cell_volume());
  for (int j = 0; j < g.ny; ++j) {
    w.x(0, j) *= 0.5;
    w.x(g.nx, j) *= 0.5;
  }
  for (int i = 0; i < g.nx; ++i) {
    w.y(i, 0) *= 0.5;
    w.y(i, g.ny) *= 0.5;
  }
  return w;
}

double inner_product_l2(const VectorField& f, const VectorField& g) {
  require_same_grid(f.grid, g.grid, "inner_product_l2");
  const Grid2D& gr = f.grid;
  double sx = 0.0;
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i <= gr.nx; ++i) {
      const double w = (i == 0 || i == gr.nx) ? 0.5 : 1.0;
      const std::size_t k = gr.xface(i, j);
      sx += w * f.ux[k] * g.ux[k];
    }
  double sy = 0.0;
  for (int j = 0; j <= gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const double w = (j == 0 || j == gr.ny) ? 0.5 : 1.0;
      const std::size_t k = gr.yface(i, j);
      sy += w * f.uy[k] * g.uy[k];
    }
  return (sx + sy) * gr.cell_volume();
}

double norm_l2(const ScalarField& f) { return std::sqrt(inner_product_l2(f, f)); }
double norm_l2(const VectorField& f) { return std::sqrt(inner_product_l2(f, f)); }

}  // namespace nchns
