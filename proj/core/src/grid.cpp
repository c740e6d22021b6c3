#include "nchns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nchns/error.hpp"

namespace nchns {

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
  if (nx < 4 || ny < 4) {
    throw Error("Grid2D: need at least 4 cells per direction, got " + std::to_string(nx) + "x" +
                std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0)) throw Error("Grid2D: edge lengths must be positive");
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (!(a == b)) throw GridMismatch(std::string(where) + ": grid mismatch");
}

namespace {

void add_scaled(std::vector<double>& a, double s, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * b[k];
}

}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) { return axpy(1.0, o); }
ScalarField& ScalarField::operator-=(const ScalarField& o) { return axpy(-1.0, o); }

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values) v *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
  require_same_grid(grid, o.grid, "ScalarField::axpy");
  add_scaled(values, s, o.values);
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "hadamard");
  ScalarField r(a.grid);
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = a.values[k] * b.values[k];
  return r;
}

VectorField& VectorField::operator+=(const VectorField& o) { return axpy(1.0, o); }
VectorField& VectorField::operator-=(const VectorField& o) { return axpy(-1.0, o); }

VectorField& VectorField::operator*=(double s) {
  for (auto& v : ux) v *= s;
  for (auto& v : uy) v *= s;
  return *this;
}

VectorField& VectorField::axpy(double s, const VectorField& o) {
  require_same_grid(grid, o.grid, "VectorField::axpy");
  add_scaled(ux, s, o.ux);
  add_scaled(uy, s, o.uy);
  return *this;
}

VectorField& VectorField::zero_boundary_normal() {
  for (int j = 0; j < grid.ny; ++j) {
    ux[grid.xface(0, j)] = 0.0;
    ux[grid.xface(grid.nx, j)] = 0.0;
  }
  for (int i = 0; i < grid.nx; ++i) {
    uy[grid.yface(i, 0)] = 0.0;
    uy[grid.yface(i, grid.ny)] = 0.0;
  }
  return *this;
}

double VectorField::max_boundary_normal() const {
  double m = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    m = std::max({m, std::abs(ux[grid.xface(0, j)]), std::abs(ux[grid.xface(grid.nx, j)])});
  }
  for (int i = 0; i < grid.nx; ++i) {
    m = std::max({m, std::abs(uy[grid.yface(i, 0)]), std::abs(uy[grid.yface(i, grid.ny)])});
  }
  return m;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const ScalarField& f) { return max_abs(f.values); }
double max_abs(const VectorField& f) { return std::max(max_abs(f.ux), max_abs(f.uy)); }

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const VectorField& f) {
  auto fin = [](double x) { return std::isfinite(x); };
  return std::all_of(f.ux.begin(), f.ux.end(), fin) && std::all_of(f.uy.begin(), f.uy.end(), fin);
}

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

}  // namespace nchns
