#include "nchns/nonlocal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <random>

#include "nchns/error.hpp"
#include "nchns/operators.hpp"
#include "nchns/stencil.hpp"

namespace nchns {

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::mollified_newtonian: return "newtonian";
    case KernelFamily::constant: return "constant";
    case KernelFamily::delta: return "delta";
    case KernelFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

namespace detail {

namespace {
// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}
}  // namespace

// Linear convolution on the nx x ny cell array through a 2nx x 2ny circular
// convolution; offsets d in (-n, n) map to d mod 2n without aliasing.
class ConvolutionEngine {
 public:
  ConvolutionEngine(const Grid2D& g, const std::vector<double>& k, const std::vector<double>& gx,
                    const std::vector<double>& gy)
      : grid_(g), mx_(2 * g.nx), my_(2 * g.ny), nspec_(static_cast<std::size_t>(my_) * (mx_ / 2 + 1)) {
    auto real = fftw_buffer<double>(nreal());
    auto spec = fftw_buffer<fftw_complex>(nspec_);
    {
      std::lock_guard lock(plan_mutex());
      forward_ = fftw_plan_dft_r2c_2d(my_, mx_, real.get(), spec.get(), FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(my_, mx_, spec.get(), real.get(), FFTW_ESTIMATE);
    }
    if (!forward_ || !backward_) throw Error("ConvolutionEngine: FFTW planning failed");
    khat_ = transform_stencil(k);
    gxhat_ = transform_stencil(gx);
    gyhat_ = transform_stencil(gy);
  }

  ~ConvolutionEngine() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  ConvolutionEngine(const ConvolutionEngine&) = delete;
  ConvolutionEngine& operator=(const ConvolutionEngine&) = delete;

  std::vector<double> convolve_k(std::span<const double> f) const { return apply(khat_, f); }
  std::vector<double> convolve_gx(std::span<const double> f) const { return apply(gxhat_, f); }
  std::vector<double> convolve_gy(std::span<const double> f) const { return apply(gyhat_, f); }

 private:
  std::size_t nreal() const { return static_cast<std::size_t>(mx_) * my_; }

  std::vector<std::complex<double>> transform_stencil(const std::vector<double>& s) const {
    const Grid2D& g = grid_;
    auto real = fftw_buffer<double>(nreal());
    std::fill(real.get(), real.get() + nreal(), 0.0);
    const int wx = 2 * g.nx - 1;
    for (int dj = -(g.ny - 1); dj <= g.ny - 1; ++dj) {
      for (int di = -(g.nx - 1); di <= g.nx - 1; ++di) {
        const int ix = (di + mx_) % mx_;
        const int iy = (dj + my_) % my_;
        real[static_cast<std::size_t>(iy) * mx_ + ix] =
            s[static_cast<std::size_t>(dj + g.ny - 1) * wx + (di + g.nx - 1)];
      }
    }
    auto spec = fftw_buffer<fftw_complex>(nspec_);
    fftw_execute_dft_r2c(forward_, real.get(), spec.get());
    std::vector<std::complex<double>> out(nspec_);
    for (std::size_t k = 0; k < nspec_; ++k) out[k] = {spec[k][0], spec[k][1]};
    return out;
  }

  std::vector<double> apply(const std::vector<std::complex<double>>& shat, std::span<const double> f) const {
    const Grid2D& g = grid_;
    auto real = fftw_buffer<double>(nreal());
    std::fill(real.get(), real.get() + nreal(), 0.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) real[static_cast<std::size_t>(j) * mx_ + i] = f[g.cell(i, j)];
    auto spec = fftw_buffer<fftw_complex>(nspec_);
    fftw_execute_dft_r2c(forward_, real.get(), spec.get());
    for (std::size_t k = 0; k < nspec_; ++k) {
      const std::complex<double> z = std::complex<double>(spec[k][0], spec[k][1]) * shat[k];
      spec[k][0] = z.real();
      spec[k][1] = z.imag();
    }
    fftw_execute_dft_c2r(backward_, spec.get(), real.get());
    const double scale = g.cell_volume() / static_cast<double>(nreal());
    std::vector<double> out(g.ncells());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out[g.cell(i, j)] = real[static_cast<std::size_t>(j) * mx_ + i] * scale;
    return out;
  }

  Grid2D grid_;
  int mx_, my_;
  std::size_t nspec_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<std::complex<double>> khat_, gxhat_, gyhat_;
};

}  // namespace detail

namespace {

std::size_t table_size(const Grid2D& g) {
  return static_cast<std::size_t>(2 * g.nx - 1) * (2 * g.ny - 1);
}

template <class F>
void tabulate(const Grid2D& g, F&& f, std::vector<double>& k, std::vector<double>& gx,
              std::vector<double>& gy) {
  k.assign(table_size(g), 0.0);
  gx.assign(table_size(g), 0.0);
  gy.assign(table_size(g), 0.0);
  const int wx = 2 * g.nx - 1;
  for (int dj = -(g.ny - 1); dj <= g.ny - 1; ++dj)
    for (int di = -(g.nx - 1); di <= g.nx - 1; ++di) {
      const std::size_t idx = static_cast<std::size_t>(dj + g.ny - 1) * wx + (di + g.nx - 1);
      f(di * g.dx(), dj * g.dy(), k[idx], gx[idx], gy[idx]);
    }
}

}  // namespace

Kernel::Kernel(const Grid2D& g, KernelFamily family, double amplitude, double length,
               std::vector<double> k, std::vector<double> gx, std::vector<double> gy)
    : grid_(g), family_(family), amplitude_(amplitude), length_(length), k_(std::move(k)),
      gx_(std::move(gx)), gy_(std::move(gy)) {
  if (k_.size() != table_size(g) || gx_.size() != table_size(g) || gy_.size() != table_size(g)) {
    throw Error("Kernel: stencil tables must have (2nx-1)(2ny-1) entries");
  }
  engine_ = std::make_shared<const detail::ConvolutionEngine>(g, k_, gx_, gy_);
  a_ = convolve(*this, ScalarField(g, 1.0));
}

Kernel Kernel::gaussian(const Grid2D& g, double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw HypothesisViolation("gaussian kernel: sigma must be positive");
  std::vector<double> k, gx, gy;
  const double s2 = sigma * sigma;
  tabulate(g, [&](double zx, double zy, double& kv, double& gxv, double& gyv) {
    kv = amplitude * std::exp(-(zx * zx + zy * zy) / (2.0 * s2));
    gxv = -kv * zx / s2;
    gyv = -kv * zy / s2;
  }, k, gx, gy);
  return Kernel(g, KernelFamily::gaussian, amplitude, sigma, std::move(k), std::move(gx), std::move(gy));
}

Kernel Kernel::mollified_newtonian(const Grid2D& g, double amplitude, double core_radius) {
  if (!(core_radius > 0.0)) throw HypothesisViolation("newtonian kernel: core radius must be positive");
  std::vector<double> k, gx, gy;
  const double e2 = core_radius * core_radius;
  const double rho2 = g.lx * g.lx + g.ly * g.ly;
  const double c = amplitude / (4.0 * std::numbers::pi);
  tabulate(g, [&](double zx, double zy, double& kv, double& gxv, double& gyv) {
    const double r2 = zx * zx + zy * zy + e2;
    kv = -c * std::log(r2 / (rho2 + e2));
    gxv = -2.0 * c * zx / r2;
    gyv = -2.0 * c * zy / r2;
  }, k, gx, gy);
  return Kernel(g, KernelFamily::mollified_newtonian, amplitude, core_radius, std::move(k),
                std::move(gx), std::move(gy));
}

Kernel Kernel::constant(const Grid2D& g, double c) {
  std::vector<double> k(table_size(g), c), gx(table_size(g), 0.0), gy(table_size(g), 0.0);
  return Kernel(g, KernelFamily::constant, c, 0.0, std::move(k), std::move(gx), std::move(gy));
}

Kernel Kernel::delta(const Grid2D& g) {
  std::vector<double> k(table_size(g), 0.0), gx(table_size(g), 0.0), gy(table_size(g), 0.0);
  const int wx = 2 * g.nx - 1;
  k[static_cast<std::size_t>(g.ny - 1) * wx + (g.nx - 1)] = 1.0 / g.cell_volume();
  return Kernel(g, KernelFamily::delta, 1.0, 0.0, std::move(k), std::move(gx), std::move(gy));
}

Kernel Kernel::tabulated(const Grid2D& g, std::vector<double> k, std::vector<double> grad_x,
                         std::vector<double> grad_y) {
  return Kernel(g, KernelFamily::tabulated, 1.0, 0.0, std::move(k), std::move(grad_x), std::move(grad_y));
}

Kernel Kernel::scaled(double factor) const {
  auto k = k_, gx = gx_, gy = gy_;
  for (auto& v : k) v *= factor;
  for (auto& v : gx) v *= factor;
  for (auto& v : gy) v *= factor;
  return Kernel(grid_, family_, amplitude_ * factor, length_, std::move(k), std::move(gx), std::move(gy));
}

bool Kernel::has_analytic_form() const {
  return family_ == KernelFamily::gaussian || family_ == KernelFamily::mollified_newtonian ||
         family_ == KernelFamily::constant;
}

double Kernel::value(double zx, double zy) const {
  switch (family_) {
    case KernelFamily::gaussian:
      return amplitude_ * std::exp(-(zx * zx + zy * zy) / (2.0 * length_ * length_));
    case KernelFamily::mollified_newtonian: {
      const double e2 = length_ * length_;
      const double rho2 = grid_.lx * grid_.lx + grid_.ly * grid_.ly;
      return -amplitude_ / (4.0 * std::numbers::pi) * std::log((zx * zx + zy * zy + e2) / (rho2 + e2));
    }
    case KernelFamily::constant:
      return amplitude_;
    default:
      throw Error("Kernel::value: no analytic form for " + to_string(family_));
  }
}

void Kernel::gradient(double zx, double zy, double& gx, double& gy) const {
  switch (family_) {
    case KernelFamily::gaussian: {
      const double s2 = length_ * length_;
      const double k = value(zx, zy);
      gx = -k * zx / s2;
      gy = -k * zy / s2;
      return;
    }
    case KernelFamily::mollified_newtonian: {
      const double r2 = zx * zx + zy * zy + length_ * length_;
      const double c = amplitude_ / (2.0 * std::numbers::pi);
      gx = -c * zx / r2;
      gy = -c * zy / r2;
      return;
    }
    case KernelFamily::constant:
      gx = gy = 0.0;
      return;
    default:
      throw Error("Kernel::gradient: no analytic form for " + to_string(family_));
  }
}

std::size_t Kernel::offset_index(int di, int dj) const {
  return static_cast<std::size_t>(dj + grid_.ny - 1) * (2 * grid_.nx - 1) + (di + grid_.nx - 1);
}

double Kernel::min_a() const { return *std::min_element(a_.values.begin(), a_.values.end()); }

ScalarField convolve(const Kernel& k, const ScalarField& phi) {
  require_same_grid(k.grid(), phi.grid, "convolve");
  ScalarField r(phi.grid);
  r.values = k.engine().convolve_k(phi.values);
  return r;
}

ScalarField compute_a(const Kernel& k, const Grid2D& grid) {
  return convolve(k, ScalarField(grid, 1.0));
}

CellGradient grad_convolve_cells(const Kernel& k, const ScalarField& phi) {
  require_same_grid(k.grid(), phi.grid, "grad_convolve");
  CellGradient r{ScalarField(phi.grid), ScalarField(phi.grid)};
  r.x.values = k.engine().convolve_gx(phi.values);
  r.y.values = k.engine().convolve_gy(phi.values);
  return r;
}

VectorField grad_convolve(const Kernel& k, const ScalarField& phi) {
  const CellGradient c = grad_convolve_cells(k, phi);
  const Grid2D& g = phi.grid;
  VectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) out.x(i, j) = 0.5 * (c.x(i - 1, j) + c.x(i, j));
    out.x(0, j) = c.x(0, j);
    out.x(g.nx, j) = c.x(g.nx - 1, j);
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) out.y(i, j) = 0.5 * (c.y(i, j - 1) + c.y(i, j));
    out.y(i, 0) = c.y(i, 0);
    out.y(i, g.ny) = c.y(i, g.ny - 1);
  }
  return out;
}

ScalarField grad_dot_convolve(const Kernel& k, const ScalarField& q) {
  require_same_grid(k.grid(), q.grid, "grad_dot_convolve");
  const CellVector gq = face_to_cell(gradient_cc_to_face(q));
  ScalarField r(q.grid);
  r.values = k.engine().convolve_gx(gq.x.values);
  stencil::add_to(r.values, k.engine().convolve_gy(gq.y.values));
  return r;
}

AdmissibilityReport check_admissibility(const Kernel& k, int samples, unsigned seed) {
  if (samples < 1) throw Error("check_admissibility: samples must be >= 1");
  const Grid2D& g = k.grid();
  AdmissibilityReport rep;
  rep.samples = samples;

  double kmax = 0.0, gmax = 0.0, sym = 0.0, asym = 0.0;
  for (int dj = -(g.ny - 1); dj <= g.ny - 1; ++dj)
    for (int di = -(g.nx - 1); di <= g.nx - 1; ++di) {
      kmax = std::max(kmax, std::abs(k.stencil(di, dj)));
      gmax = std::max({gmax, std::abs(k.grad_stencil_x(di, dj)), std::abs(k.grad_stencil_y(di, dj))});
      sym = std::max(sym, std::abs(k.stencil(di, dj) - k.stencil(-di, -dj)));
      asym = std::max({asym, std::abs(k.grad_stencil_x(di, dj) + k.grad_stencil_x(-di, -dj)),
                       std::abs(k.grad_stencil_y(di, dj) + k.grad_stencil_y(-di, -dj))});
    }
  rep.symmetry_defect = sym;
  rep.symmetric = sym <= 1e-14 * std::max(kmax, 1e-300);
  rep.grad_antisymmetric = asym <= 1e-14 * std::max(gmax, 1e-300);

  rep.min_a = k.min_a();
  rep.max_a = *std::max_element(k.a_field().values.begin(), k.a_field().values.end());
  rep.a_nonnegative = rep.min_a >= 0.0;

  // Smooth random psi: cosine modes up to wavenumber 4 in each direction.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kmodes = 4;
  for (int s = 0; s < samples; ++s) {
    double coef[kmodes + 1][kmodes + 1];
    for (auto& row : coef)
      for (auto& c : row) c = normal(rng);
    ScalarField psi(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double v = 0.0;
        for (int a = 0; a <= kmodes; ++a)
          for (int b = 0; b <= kmodes; ++b)
            v += coef[a][b] * std::cos(a * std::numbers::pi * g.xc(i) / g.lx) *
                 std::cos(b * std::numbers::pi * g.yc(j) / g.ly);
        psi(i, j) = v;
      }
    const CellGradient w = grad_convolve_cells(k, psi);
    const double num = std::sqrt(inner_product_l2(gradient_cc_to_face(w.x), gradient_cc_to_face(w.x)) +
                                 inner_product_l2(gradient_cc_to_face(w.y), gradient_cc_to_face(w.y)));
    const double den = norm_l2(psi);
    if (den > 0.0) rep.gradient_bound = std::max(rep.gradient_bound, num / den);
  }
  return rep;
}

double nonlocal_interaction_energy(const Kernel& k, const ScalarField& phi) {
  const ScalarField kphi = convolve(k, phi);
  return 0.5 * inner_product_l2(hadamard(k.a_field(), phi), phi) - 0.5 * inner_product_l2(kphi, phi);
}

}  // namespace nchns
