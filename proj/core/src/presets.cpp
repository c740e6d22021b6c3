#include "nchns/presets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "nchns/error.hpp"

namespace nchns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double num(const PresetCall& c, std::size_t i) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(c.args.at(i), &pos);
    if (pos != c.args[i].size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error("preset " + c.name + ": argument " + std::to_string(i + 1) + " is not a number");
  }
}

void arity(const PresetCall& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi) {
    throw Error("preset " + c.name + ": expected " + std::to_string(lo) +
                (lo == hi ? "" : ".." + std::to_string(hi)) + " arguments");
  }
}

std::vector<double> read_raw(const std::string& path, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(n * sizeof(double))) {
    throw Error(path + ": expected " + std::to_string(n) + " float64 values");
  }
  return v;
}

}  // namespace

PresetCall parse_preset(const std::string& spec) {
  const std::string s = trim(spec);
  PresetCall c;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    c.name = s;
  } else {
    if (s.back() != ')') throw Error("malformed preset '" + spec + "'");
    c.name = trim(s.substr(0, open));
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
      std::size_t start = 0;
      while (true) {
        const auto comma = inner.find(',', start);
        c.args.push_back(trim(inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  }
  if (c.name.empty()) throw Error("malformed preset '" + spec + "'");
  return c;
}

ScalarField make_phase_field(const std::string& spec, const Grid2D& g) {
  const PresetCall c = parse_preset(spec);
  ScalarField f(g);
  if (c.name == "uniform") {
    arity(c, 1, 1);
    f = ScalarField(g, num(c, 0));
  } else if (c.name == "random") {
    arity(c, 2, 3);
    const double amp = num(c, 0);
    const double mean = c.args.size() > 2 ? num(c, 2) : 0.0;
    std::mt19937_64 rng(static_cast<std::uint64_t>(num(c, 1)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : f.values) x = mean + amp * u(rng);
  } else if (c.name == "bubble") {
    arity(c, 3, 4);
    const double r = num(c, 0), cx = num(c, 1), cy = num(c, 2);
    const double w = c.args.size() > 3 ? num(c, 3) : 1.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = std::hypot(g.xc(i) - cx, g.yc(j) - cy) - r;
        f(i, j) = -std::tanh(d / (std::numbers::sqrt2 * w));
      }
  } else if (c.name == "file") {
    arity(c, 1, 1);
    f.values = read_raw(c.args[0], g.ncells());
  } else {
    throw Error("unknown phase-field preset '" + c.name + "'");
  }
  return f;
}

VectorField make_velocity(const std::string& spec, const Grid2D& g) {
  const PresetCall c = parse_preset(spec);
  if (c.name == "zero") {
    arity(c, 0, 0);
    return VectorField(g);
  }
  if (c.name == "taylor-vortex") {
    arity(c, 0, 1);
    return taylor_vortex(g, c.args.empty() ? 1.0 : num(c, 0));
  }
  if (c.name == "file") {
    arity(c, 1, 1);
    const auto raw = read_raw(c.args[0], g.nxfaces() + g.nyfaces());
    VectorField u(g);
    std::copy(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(g.nxfaces()), u.ux.begin());
    std::copy(raw.begin() + static_cast<std::ptrdiff_t>(g.nxfaces()), raw.end(), u.uy.begin());
    return u;
  }
  throw Error("unknown velocity preset '" + c.name + "'");
}

VectorField velocity_from_streamfunction(const Grid2D& g, const std::vector<double>& psi) {
  if (psi.size() != g.nnodes()) throw GridMismatch("streamfunction: need one value per node");
  VectorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) u.x(i, j) = (psi[g.node(i, j + 1)] - psi[g.node(i, j)]) / g.dy();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.y(i, j) = -(psi[g.node(i + 1, j)] - psi[g.node(i, j)]) / g.dx();
  return u;
}

VectorField taylor_vortex(const Grid2D& g, double amplitude) {
  std::vector<double> psi(g.nnodes());
  const double pi = std::numbers::pi;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      if (i == 0 || j == 0 || i == g.nx || j == g.ny) continue;  // exact zero on the wall
      const double sx = std::sin(pi * g.xf(i) / g.lx), sy = std::sin(pi * g.yf(j) / g.ly);
      psi[g.node(i, j)] = amplitude * g.lx / pi * sx * sx * sy * sy;
    }
  return velocity_from_streamfunction(g, psi);
}

namespace {

// Sum of low sine modes with random coefficients and a smooth random time
// modulation per mode; the sine factors vanish on the boundary.
std::vector<std::vector<double>> smooth_node_series(const Grid2D& g, int nt, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int modes = 3;
  const double pi = std::numbers::pi;
  double a[modes][modes], b[modes][modes], w[modes][modes];
  for (int m = 0; m < modes; ++m)
    for (int n = 0; n < modes; ++n) {
      a[m][n] = normal(rng) / (1 + m + n);
      b[m][n] = normal(rng) / (1 + m + n);
      w[m][n] = 2.0 * pi * (0.5 + std::abs(normal(rng)));
    }
  std::vector<std::vector<double>> out(static_cast<std::size_t>(nt), std::vector<double>(g.nnodes()));
  for (int k = 0; k < nt; ++k) {
    const double t = (k + 0.5) / nt;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        if (i == 0 || j == 0 || i == g.nx || j == g.ny) continue;
        double v = 0.0;
        for (int m = 0; m < modes; ++m)
          for (int n = 0; n < modes; ++n)
            v += (a[m][n] + b[m][n] * std::sin(w[m][n] * t)) * std::sin((m + 1) * pi * g.xf(i) / g.lx) *
                 std::sin((n + 1) * pi * g.yf(j) / g.ly);
        out[k][g.node(i, j)] = v;
      }
  }
  return out;
}

void normalize(VectorSeries& s, double amplitude) {
  double m = 0.0;
  for (const auto& f : s) m = std::max(m, max_abs(f));
  if (m > 0.0)
    for (auto& f : s) f *= amplitude / m;
}

}  // namespace

VectorSeries smooth_random_control(const Grid2D& g, int nt, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto psi = smooth_node_series(g, nt, rng);
  VectorSeries v;
  v.reserve(static_cast<std::size_t>(nt));
  for (int k = 0; k < nt; ++k) v.push_back(velocity_from_streamfunction(g, psi[k]));
  normalize(v, amplitude);
  return v;
}

VectorSeries smooth_random_forcing(const Grid2D& g, int nt, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto px = smooth_node_series(g, nt, rng);
  const auto py = smooth_node_series(g, nt, rng);
  VectorSeries v(static_cast<std::size_t>(nt), VectorField(g));
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) v[k].x(i, j) = 0.5 * (px[k][g.node(i, j)] + px[k][g.node(i, j + 1)]);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) v[k].y(i, j) = 0.5 * (py[k][g.node(i, j)] + py[k][g.node(i + 1, j)]);
    v[k].zero_boundary_normal();
  }
  normalize(v, amplitude);
  return v;
}

}  // namespace nchns
