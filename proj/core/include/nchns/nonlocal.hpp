#pragma once

// Interaction kernels and the nonlocal operators built from them.
//
// A Kernel tabulates K and grad K on every integer cell offset that can occur
// inside the domain, |di| < nx, |dj| < ny (this covers the ball of radius
// diam(Omega)). Convolutions are midpoint quadratures over Omega only,
//
//   (K * phi)(x_c) = sum_{y_c} K(x_c - y_c) phi(y_c) dx dy,
//
// evaluated with zero-padded FFTs.

#include <memory>
#include <string>
#include <vector>

#include "nchns/grid.hpp"

namespace nchns {

enum class KernelFamily { gaussian, mollified_newtonian, constant, delta, tabulated };

std::string to_string(KernelFamily f);

namespace detail {
class ConvolutionEngine;
}

class Kernel {
 public:
  /// alpha * exp(-|z|^2 / (2 sigma^2)).
  static Kernel gaussian(const Grid2D& g, double amplitude, double sigma);
  /// -(alpha / 4 pi) log((|z|^2 + eps^2) / rho^2), rho = diam(Omega): the 2D
  /// Newtonian potential with its core smoothed inside eps, shifted so that
  /// K >= 0 on the tabulated offsets.
  static Kernel mollified_newtonian(const Grid2D& g, double amplitude, double core_radius);
  /// K == c on every offset (grad K == 0).
  static Kernel constant(const Grid2D& g, double c);
  /// Discrete identity: K = 1/(dx dy) at offset 0, zero elsewhere.
  static Kernel delta(const Grid2D& g);
  /// Arbitrary tables in offset layout (see offset_index). Symmetry is not
  /// enforced; check_admissibility reports violations.
  static Kernel tabulated(const Grid2D& g, std::vector<double> k, std::vector<double> grad_x,
                          std::vector<double> grad_y);

  /// Same kernel with amplitude multiplied by `factor`.
  Kernel scaled(double factor) const;

  const Grid2D& grid() const { return grid_; }
  KernelFamily family() const { return family_; }
  double amplitude() const { return amplitude_; }
  /// sigma for the Gaussian, core radius for the Newtonian family.
  double length_scale() const { return length_; }

  /// Analytic K and grad K at displacement z; only for the analytic families.
  double value(double zx, double zy) const;
  void gradient(double zx, double zy, double& gx, double& gy) const;
  bool has_analytic_form() const;

  std::size_t offset_index(int di, int dj) const;
  double stencil(int di, int dj) const { return k_[offset_index(di, dj)]; }
  double grad_stencil_x(int di, int dj) const { return gx_[offset_index(di, dj)]; }
  double grad_stencil_y(int di, int dj) const { return gy_[offset_index(di, dj)]; }

  /// a(x) = (K * 1)(x), cached at construction.
  const ScalarField& a_field() const { return a_; }
  double min_a() const;

  const detail::ConvolutionEngine& engine() const { return *engine_; }

 private:
  Kernel(const Grid2D& g, KernelFamily family, double amplitude, double length,
         std::vector<double> k, std::vector<double> gx, std::vector<double> gy);

  Grid2D grid_;
  KernelFamily family_ = KernelFamily::tabulated;
  double amplitude_ = 1.0;
  double length_ = 0.0;
  std::vector<double> k_, gx_, gy_;
  std::shared_ptr<const detail::ConvolutionEngine> engine_;
  ScalarField a_;
};

/// K * phi over Omega.
ScalarField convolve(const Kernel& k, const ScalarField& phi);
/// a = K * 1 on `grid` (must equal the kernel's grid).
ScalarField compute_a(const Kernel& k, const Grid2D& grid);
/// (grad K * phi) at cell centers, component-wise.
struct CellGradient {
  ScalarField x, y;
};
CellGradient grad_convolve_cells(const Kernel& k, const ScalarField& phi);
/// (grad K * phi) interpolated to faces: interior faces average the two
/// adjacent cells, boundary faces take the adjacent cell value.
VectorField grad_convolve(const Kernel& k, const ScalarField& phi);
/// (grad K .* grad q)(x) = int grad K(x - y) . grad q(y) dy, with grad q from
/// gradient_cc_to_face averaged to centers.
ScalarField grad_dot_convolve(const Kernel& k, const ScalarField& q);

struct AdmissibilityReport {
  bool symmetric = false;         // K(z) == K(-z) on all offsets
  double symmetry_defect = 0.0;   // max |K(z) - K(-z)|
  bool grad_antisymmetric = false;
  bool a_nonnegative = false;     // min a >= 0
  double min_a = 0.0;
  double max_a = 0.0;
  double gradient_bound = 0.0;    // max over samples of ||grad(grad K * psi)|| / ||psi||
  int samples = 0;
  bool pass() const { return symmetric && grad_antisymmetric && a_nonnegative; }
};

/// Empirical check of the kernel hypotheses: symmetry, a >= 0, and an
/// estimate of the constant in ||grad(grad K * psi)|| <= C ||psi|| from
/// `samples` random smooth psi (seeded deterministically).
AdmissibilityReport check_admissibility(const Kernel& k, int samples, unsigned seed = 1234);

/// Free energy 1/4 int int K(x-y)(phi(x)-phi(y))^2 = 1/2 (a phi, phi) - 1/2 (K*phi, phi).
double nonlocal_interaction_energy(const Kernel& k, const ScalarField& phi);

}  // namespace nchns
