#pragma once

// Primitive linear maps between the four staggered locations (cells, x-faces,
// y-faces, nodes). Every primitive comes with its exact Euclidean transpose
// (suffix `_t`); both are generated from one coefficient table, so
// <A x, y> == <x, A^T y> holds to round-off by construction.
//
// Wall conventions:
//   - cell -> face maps produce 0 on boundary-normal faces (zero flux / no-slip);
//   - face -> node maps use reflection ghosts (u_ghost = -u_interior), i.e.
//     tangential velocity vanishes on the wall.

#include <span>
#include <vector>

#include "nchns/grid.hpp"

namespace nchns::stencil {

using Vec = std::vector<double>;
using In = std::span<const double>;

// cell -> x-face / y-face: one-sided differences and two-point averages at
// interior faces, zero on boundary faces.
Vec grad_x(const Grid2D& g, In c);
Vec grad_x_t(const Grid2D& g, In f);
Vec grad_y(const Grid2D& g, In c);
Vec grad_y_t(const Grid2D& g, In f);
Vec avg_x(const Grid2D& g, In c);
Vec avg_x_t(const Grid2D& g, In f);
Vec avg_y(const Grid2D& g, In c);
Vec avg_y_t(const Grid2D& g, In f);

// x-face / y-face -> cell: flux differences and face-to-center averages.
Vec diff_x(const Grid2D& g, In f);
Vec diff_x_t(const Grid2D& g, In c);
Vec diff_y(const Grid2D& g, In f);
Vec diff_y_t(const Grid2D& g, In c);
Vec mean_x(const Grid2D& g, In f);
Vec mean_x_t(const Grid2D& g, In c);
Vec mean_y(const Grid2D& g, In f);
Vec mean_y_t(const Grid2D& g, In c);

// x-face -> node: d/dy and y-average (reflection ghosts at y-walls).
Vec xnode_dy(const Grid2D& g, In f);
Vec xnode_dy_t(const Grid2D& g, In n);
Vec xnode_avg(const Grid2D& g, In f);
Vec xnode_avg_t(const Grid2D& g, In n);
// y-face -> node: d/dx and x-average (reflection ghosts at x-walls).
Vec ynode_dx(const Grid2D& g, In f);
Vec ynode_dx_t(const Grid2D& g, In n);
Vec ynode_avg(const Grid2D& g, In f);
Vec ynode_avg_t(const Grid2D& g, In n);

// node -> x-face: d/dy; node -> y-face: d/dx. Evaluated on every face.
Vec node_dy_to_x(const Grid2D& g, In n);
Vec node_dy_to_x_t(const Grid2D& g, In f);
Vec node_dx_to_y(const Grid2D& g, In n);
Vec node_dx_to_y_t(const Grid2D& g, In f);

// cell -> node: mean of the 1, 2 or 4 adjacent cells.
Vec cell_to_node(const Grid2D& g, In c);
Vec cell_to_node_t(const Grid2D& g, In n);
// node -> cell: mean of the four corners.
Vec node_to_cell(const Grid2D& g, In n);
Vec node_to_cell_t(const Grid2D& g, In c);

// Pointwise helpers on raw arrays.
Vec mul(In a, In b);
void add_to(Vec& acc, In b, double s = 1.0);

}  // namespace nchns::stencil
