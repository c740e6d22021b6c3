#pragma once

// Staggered (MAC) grid on the rectangle [0, lx] x [0, ly].
//
// Layout, all arrays row-major with x fastest:
//   cells    nx     x ny      scalars (phi, mu, pressure, ...)
//   x-faces  (nx+1) x ny      x-velocity, located at (i*dx, (j+1/2)*dy)
//   y-faces  nx     x (ny+1)  y-velocity, located at ((i+1/2)*dx, j*dy)
//   nodes    (nx+1) x (ny+1)  cell corners, used for shear terms only

#include <cstddef>
#include <span>
#include <vector>

namespace nchns {

struct Grid2D {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double lx_, double ly_);

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double cell_volume() const { return dx() * dy(); }
  double area() const { return lx * ly; }

  std::size_t ncells() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t nxfaces() const { return static_cast<std::size_t>(nx + 1) * ny; }
  std::size_t nyfaces() const { return static_cast<std::size_t>(nx) * (ny + 1); }
  std::size_t nnodes() const { return static_cast<std::size_t>(nx + 1) * (ny + 1); }

  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t xface(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }
  std::size_t yface(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }

  double xc(int i) const { return (i + 0.5) * dx(); }
  double yc(int j) const { return (j + 0.5) * dy(); }
  double xf(int i) const { return i * dx(); }
  double yf(int j) const { return j * dy(); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Throws GridMismatch if the grids differ.
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

struct ScalarField {
  Grid2D grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid2D& g, double fill = 0.0)
      : grid(g), values(g.ncells(), fill) {}

  double& operator()(int i, int j) { return values[grid.cell(i, j)]; }
  double operator()(int i, int j) const { return values[grid.cell(i, j)]; }

  std::size_t size() const { return values.size(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

struct VectorField {
  Grid2D grid;
  std::vector<double> ux;  // x-faces
  std::vector<double> uy;  // y-faces

  VectorField() = default;
  explicit VectorField(const Grid2D& g, double fill = 0.0)
      : grid(g), ux(g.nxfaces(), fill), uy(g.nyfaces(), fill) {}

  double& x(int i, int j) { return ux[grid.xface(i, j)]; }
  double x(int i, int j) const { return ux[grid.xface(i, j)]; }
  double& y(int i, int j) { return uy[grid.yface(i, j)]; }
  double y(int i, int j) const { return uy[grid.yface(i, j)]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double s, const VectorField& o);

  /// Zero the boundary-normal faces (x-faces at i = 0, nx; y-faces at j = 0, ny).
  VectorField& zero_boundary_normal();
  /// Largest absolute boundary-normal face value.
  double max_boundary_normal() const;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Rank-2 tensor with all four components stored at cell centers.
struct TensorField {
  Grid2D grid;
  std::vector<double> xx, xy, yx, yy;

  TensorField() = default;
  explicit TensorField(const Grid2D& g)
      : grid(g), xx(g.ncells()), xy(g.ncells()), yx(g.ncells()), yy(g.ncells()) {}
};

/// Time-indexed sequences. Control series have one entry per step slot
/// (nt entries), state-like series one entry per time level (nt + 1).
using ScalarSeries = std::vector<ScalarField>;
using VectorSeries = std::vector<VectorField>;

double max_abs(std::span<const double> v);
double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

/// Midpoint-rule integral of a cell field.
double integral(const ScalarField& f);

}  // namespace nchns
