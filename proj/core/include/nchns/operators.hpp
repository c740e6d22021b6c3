#pragma once

// Second-order MAC-grid differential operators, plus the partial transposes
// needed by the tangent and adjoint sweeps.
//
// Velocity-valued operators treat boundary-normal faces as fixed zeros: they
// ignore input values there and write zeros there. Under that convention
// cell and interior-face quadrature weights coincide (dx*dy), so every `_t`
// function below is simultaneously the Euclidean transpose and the discrete
// L2 adjoint of the corresponding partial map.

#include "nchns/grid.hpp"

namespace nchns {

/// Centered differences at interior faces; zero on boundary-normal faces
/// (zero-flux condition for cell scalars).
VectorField gradient_cc_to_face(const ScalarField& phi);
/// Transpose of gradient_cc_to_face: equals -divergence of the field with its
/// boundary-normal faces zeroed.
ScalarField gradient_t(const VectorField& w);

/// Flux-difference divergence per cell.
ScalarField divergence_face_to_cc(const VectorField& w);

/// 5-point Neumann Laplacian (mirror ghosts). Symmetric, annihilates constants.
ScalarField laplacian_neumann(const ScalarField& phi);

/// Du = (grad u + grad^T u) / 2 at cell centers; off-diagonals are averaged
/// from the nodes, so xy and yx are the same array values.
TensorField sym_gradient(const VectorField& u);
/// Du : Dw evaluated cellwise from two symmetric-gradient tensors.
ScalarField double_dot(const TensorField& a, const TensorField& b);

/// 2 div(nu Du) on faces. Symmetric in u for fixed nu. Throws
/// HypothesisViolation when nu has a nonpositive entry.
VectorField div_viscous_stress(const ScalarField& nu, const VectorField& u);
/// 2 div(dnu Du) without the positivity check: the derivative of
/// div_viscous_stress with respect to nu in direction dnu.
VectorField div_viscous_stress_dnu(const ScalarField& dnu, const VectorField& u);
/// d/dnu of <lambda, 2 div(nu Du)>: the cellwise stress contraction used when
/// viscosity depends on the phase field.
ScalarField viscous_stress_nu_contraction(const VectorField& u, const VectorField& lambda);

/// div(u phi) with centered face interpolation of phi.
ScalarField advect_scalar(const VectorField& u, const ScalarField& phi);
/// Transpose of u -> advect_scalar(u, phi).
VectorField advect_scalar_t_u(const ScalarField& phi, const ScalarField& lambda);
/// Transpose of phi -> advect_scalar(u, phi).
ScalarField advect_scalar_t_phi(const VectorField& u, const ScalarField& lambda);

/// div(u (x) w) per face component: conservative centered advection of the
/// face-stored vector w by u.
VectorField advect_vector(const VectorField& u, const VectorField& w);
/// Transpose of u -> advect_vector(u, w).
VectorField advect_vector_t_u(const VectorField& w, const VectorField& lambda);
/// Transpose of w -> advect_vector(u, w).
VectorField advect_vector_t_w(const VectorField& u, const VectorField& lambda);

/// (p . grad^T) u, i.e. component j is sum_i p_i d_j u_i, assembled at cell
/// centers and averaged to interior faces.
VectorField transpose_gradient_contraction(const VectorField& p, const VectorField& u);

/// Capillary force mu grad(phi) on faces (face-averaged mu times face gradient).
VectorField kelvin_force(const ScalarField& mu, const ScalarField& phi);
/// Transpose of mu -> kelvin_force(mu, phi).
ScalarField kelvin_force_t_mu(const ScalarField& phi, const VectorField& lambda);
/// Transpose of phi -> kelvin_force(mu, phi).
ScalarField kelvin_force_t_phi(const ScalarField& mu, const VectorField& lambda);

/// Face vectors averaged to cell centers, component-wise.
struct CellVector {
  ScalarField x, y;
};
CellVector face_to_cell(const VectorField& w);
/// Cell-centered a . b for two face fields (products averaged to centers).
ScalarField face_dot_to_cell(const VectorField& a, const VectorField& b);

/// Midpoint quadrature. Face weights: dx*dy on interior faces, half of that
/// on boundary-normal faces.
double inner_product_l2(const ScalarField& f, const ScalarField& g);
double inner_product_l2(const VectorField& f, const VectorField& g);
double norm_l2(const ScalarField& f);
double norm_l2(const VectorField& f);

/// Face quadrature weights in the layout of a VectorField.
VectorField face_weights(const Grid2D& g);

}  // namespace nchns
