#include "nchns/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nchns/checkpoint.hpp"
#include "nchns/error.hpp"
#include "nchns/presets.hpp"

namespace nchns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest representation that parses back to the same double.
std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError(key, "expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError(key, "expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

int to_count(const std::string& key, const std::string& s, long long lo) {
  const long long v = to_int(key, s);
  if (v < lo || v > 1'000'000'000) throw ConfigError(key, "out of range: " + s);
  return static_cast<int>(v);
}

double auto_or_number(const std::string& key, const std::string& s) {
  return s == "auto" ? std::numeric_limits<double>::quiet_NaN() : to_double(key, s);
}
std::string fmt_auto(double x) { return std::isnan(x) ? "auto" : fmt(x); }

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NCHNS_DBL(KEY, FIELD)                                                                          \
  Entry {                                                                                              \
    KEY, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_double(k, v); }, \
        [](const RunConfig& c) { return fmt(c.FIELD); }                                                \
  }
#define NCHNS_INT(KEY, FIELD, LO)                                                                          \
  Entry {                                                                                                  \
    KEY, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_count(k, v, LO); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                                         \
  }
#define NCHNS_BOOL(KEY, FIELD)                                                                       \
  Entry {                                                                                            \
    KEY, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_bool(k, v); }, \
        [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); }                  \
  }
#define NCHNS_STR(KEY, FIELD)                                                                   \
  Entry {                                                                                       \
    KEY, [](RunConfig& c, const std::string&, const std::string& v) { c.FIELD = v; },          \
        [](const RunConfig& c) { return c.FIELD; }                                              \
  }

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      NCHNS_INT("grid.nx", nx, 2),
      NCHNS_INT("grid.ny", ny, 2),
      NCHNS_DBL("grid.lx", lx),
      NCHNS_DBL("grid.ly", ly),
      Entry{"time.dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = auto_or_number(k, v); },
            [](const RunConfig& c) { return fmt_auto(c.dt); }},
      NCHNS_DBL("time.cfl_fraction", cfl_fraction),
      NCHNS_INT("time.nt", nt, 1),
      Entry{"time.stabilization",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.stabilization = auto_or_number(k, v); },
            [](const RunConfig& c) { return fmt_auto(c.stabilization); }},
      NCHNS_DBL("time.tol_p", tol_p),
      NCHNS_BOOL("time.enforce_cfl", enforce_cfl),
      NCHNS_STR("kernel.family", kernel_family),
      NCHNS_DBL("kernel.amplitude", kernel_amplitude),
      NCHNS_DBL("kernel.sigma", kernel_sigma),
      NCHNS_DBL("kernel.core_radius", kernel_core_radius),
      NCHNS_BOOL("kernel.auto_scale", kernel_auto_scale),
      NCHNS_DBL("hypotheses.c1", constants.c1),
      NCHNS_DBL("hypotheses.c2", constants.c2),
      NCHNS_DBL("hypotheses.c3", constants.c3),
      NCHNS_DBL("hypotheses.c4", constants.c4),
      NCHNS_DBL("hypotheses.c5", constants.c5),
      NCHNS_DBL("hypotheses.p", constants.p),
      NCHNS_DBL("hypotheses.r", constants.r),
      NCHNS_DBL("potential.c4", potential.c4),
      NCHNS_DBL("potential.offset", potential.offset),
      NCHNS_DBL("viscosity.mean", viscosity.mean),
      NCHNS_DBL("viscosity.delta", viscosity.delta),
      NCHNS_DBL("viscosity.lower", viscosity.lower),
      NCHNS_DBL("viscosity.upper", viscosity.upper),
      NCHNS_STR("initial.phi", initial_phi),
      NCHNS_STR("initial.u", initial_u),
      NCHNS_STR("control.v", control),
      NCHNS_STR("targets.source", targets_source),
      NCHNS_STR("targets.control", targets_control),
      NCHNS_BOOL("targets.clip", targets_clip),
      NCHNS_DBL("weights.beta1", weights.beta1),
      NCHNS_DBL("weights.beta2", weights.beta2),
      NCHNS_DBL("weights.beta3", weights.beta3),
      NCHNS_DBL("weights.beta4", weights.beta4),
      NCHNS_DBL("weights.gamma", weights.gamma),
      NCHNS_STR("bounds.lower", bounds_lower),
      NCHNS_STR("bounds.upper", bounds_upper),
      NCHNS_INT("optimizer.max_iter", optimizer.max_iter, 0),
      NCHNS_DBL("optimizer.tol", optimizer.tol),
      NCHNS_DBL("optimizer.rel_tol", optimizer.rel_tol),
      NCHNS_DBL("optimizer.armijo_c", optimizer.armijo_c),
      NCHNS_DBL("optimizer.shrink", optimizer.shrink),
      NCHNS_INT("optimizer.max_shrinks", optimizer.max_shrinks, 0),
      Entry{"optimizer.policy",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              try {
                c.optimizer.policy = step_policy_from_string(v);
              } catch (const Error& e) {
                throw ConfigError(k, e.what());
              }
            },
            [](const RunConfig& c) { return to_string(c.optimizer.policy); }},
      NCHNS_STR("check.direction", check_direction),
      Entry{"check.eps",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.check_eps.clear();
              std::stringstream ss(v);
              std::string item;
              while (std::getline(ss, item, ',')) c.check_eps.push_back(to_double(k, trim(item)));
            },
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.check_eps.size(); ++i) s += (i ? ", " : "") + fmt(c.check_eps[i]);
              return s;
            }},
      NCHNS_DBL("check.duality_tol", check_duality_tol),
      NCHNS_DBL("check.complementarity_tol", check_complementarity_tol),
      Entry{"adjoint.scheme",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              try {
                c.adjoint = adjoint_scheme_from_string(v);
              } catch (const Error& e) {
                throw ConfigError(k, e.what());
              }
            },
            [](const RunConfig& c) { return to_string(c.adjoint); }},
      NCHNS_STR("output.dir", output_dir),
      Entry{"seed",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              const long long s = to_int(k, v);
              if (s < 0) throw ConfigError(k, "must be non-negative");
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return t;
}

#undef NCHNS_DBL
#undef NCHNS_INT
#undef NCHNS_BOOL
#undef NCHNS_STR

double diffusive_limit(const RunConfig& c) {
  const double h = std::min(c.lx / c.nx, c.ly / c.ny);
  return h * h / (8.0 * c.viscosity.upper);
}

// A bound spec is either a number or file(path).
bool bound_is_number(const std::string& s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : table()) keys.emplace_back(e.key);
  return keys;
}

RunConfig parse_config_string(const std::string& text) {
  std::map<std::string, const Entry*> index;
  for (const auto& e : table()) index[e.key] = &e;

  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(key, "unknown key (line " + std::to_string(lineno) + ")");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key (line " + std::to_string(lineno) + ")");
    if (value.empty()) throw ConfigError(key, "empty value");
    it->second->set(c, key, value);
  }
  if (std::isnan(c.dt)) c.dt = c.cfl_fraction * diffusive_limit(c);
  if (std::isnan(c.stabilization)) c.stabilization = 2.0 * c.potential.c4;
  validate_config(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

std::string echo_config(const RunConfig& c) {
  std::string out;
  std::string section;
  for (const auto& e : table()) {
    const std::string key = e.key;
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    if (!out.empty() && sec != section) out += '\n';
    section = sec;
    out += key + " = " + e.get(c) + '\n';
  }
  return out;
}

void validate_config(const RunConfig& c) {
  if (!(c.lx > 0.0)) throw ConfigError("grid.lx", "must be positive");
  if (!(c.ly > 0.0)) throw ConfigError("grid.ly", "must be positive");
  if (!(c.cfl_fraction > 0.0)) throw ConfigError("time.cfl_fraction", "must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("time.dt", "must be positive or auto");
  if (!(c.stabilization >= 0.0)) throw ConfigError("time.stabilization", "must be non-negative");
  if (!(c.tol_p > 0.0)) throw ConfigError("time.tol_p", "must be positive");
  if (c.kernel_family != "gaussian" && c.kernel_family != "newtonian") {
    throw ConfigError("kernel.family", "expected gaussian or newtonian, got '" + c.kernel_family + "'");
  }
  if (!(c.kernel_amplitude > 0.0)) throw ConfigError("kernel.amplitude", "must be positive");
  if (!(c.kernel_sigma > 0.0)) throw ConfigError("kernel.sigma", "must be positive");
  if (!(c.kernel_core_radius > 0.0)) throw ConfigError("kernel.core_radius", "must be positive");
  try {
    c.constants.validate();
  } catch (const HypothesisViolation& e) {
    throw ConfigError("hypotheses", e.what());
  }
  if (!(c.potential.c4 > 0.0)) throw ConfigError("potential.c4", "must be positive");
  if (!(c.viscosity.lower > 0.0)) throw ConfigError("viscosity.lower", "must be positive");
  if (!(c.viscosity.upper >= c.viscosity.lower)) throw ConfigError("viscosity.upper", "must be >= viscosity.lower");
  try {
    c.weights.validate();
  } catch (const HypothesisViolation& e) {
    throw ConfigError("weights", e.what());
  }
  if (c.targets_source != "zero" && c.targets_source != "control") {
    throw ConfigError("targets.source", "expected zero or control, got '" + c.targets_source + "'");
  }
  double lo = 0.0, hi = 0.0;
  const bool lo_num = bound_is_number(c.bounds_lower, lo);
  const bool hi_num = bound_is_number(c.bounds_upper, hi);
  if (!lo_num && parse_preset(c.bounds_lower).name != "file") {
    throw ConfigError("bounds.lower", "expected a number or file(path)");
  }
  if (!hi_num && parse_preset(c.bounds_upper).name != "file") {
    throw ConfigError("bounds.upper", "expected a number or file(path)");
  }
  if (lo_num && hi_num && lo > hi) {
    throw ConfigError("bounds.lower", "lower bound " + fmt(lo) + " exceeds upper bound " + fmt(hi));
  }
  if (!(c.optimizer.armijo_c > 0.0 && c.optimizer.armijo_c < 1.0)) {
    throw ConfigError("optimizer.armijo_c", "must lie in (0, 1)");
  }
  if (!(c.optimizer.shrink > 0.0 && c.optimizer.shrink < 1.0)) {
    throw ConfigError("optimizer.shrink", "must lie in (0, 1)");
  }
  if (c.optimizer.tol < 0.0) throw ConfigError("optimizer.tol", "must be non-negative");
  if (c.optimizer.rel_tol < 0.0) throw ConfigError("optimizer.rel_tol", "must be non-negative");
  if (c.check_eps.size() < 2) throw ConfigError("check.eps", "need at least two step sizes");
  for (double e : c.check_eps)
    if (!(e > 0.0)) throw ConfigError("check.eps", "step sizes must be positive");
  if (!(c.check_duality_tol > 0.0)) throw ConfigError("check.duality_tol", "must be positive");
  if (!(c.check_complementarity_tol > 0.0)) throw ConfigError("check.complementarity_tol", "must be positive");
  if (c.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

Grid2D make_grid(const RunConfig& c) { return Grid2D(c.nx, c.ny, c.lx, c.ly); }

PhysicsParams make_physics(const RunConfig& c) {
  PhysicsParams p;
  p.potential = c.potential;
  p.viscosity = c.viscosity;
  p.constants = c.constants;
  return p;
}

Kernel make_kernel(const RunConfig& c, const Grid2D& g) {
  Kernel k = c.kernel_family == "gaussian" ? Kernel::gaussian(g, c.kernel_amplitude, c.kernel_sigma)
                                           : Kernel::mollified_newtonian(g, c.kernel_amplitude, c.kernel_core_radius);
  return c.kernel_auto_scale ? auto_scale_kernel(k, c.potential, c.constants.c1) : k;
}

TimeScheme make_scheme(const RunConfig& c, const Grid2D& g) {
  TimeScheme s;
  const double h = std::min(g.dx(), g.dy());
  s.dt = std::isnan(c.dt) ? c.cfl_fraction * h * h / (8.0 * c.viscosity.upper) : c.dt;
  s.nt = c.nt;
  s.stabilization = std::isnan(c.stabilization) ? 2.0 * c.potential.c4 : c.stabilization;
  s.tol_p = c.tol_p;
  s.enforce_cfl = c.enforce_cfl;
  return s;
}

InitialData make_initial_data(const RunConfig& c, const Grid2D& g) {
  try {
    return InitialData{make_velocity(c.initial_u, g), make_phase_field(c.initial_phi, g)};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("initial", e.what());
  }
}

VectorSeries make_control(const std::string& spec, const Grid2D& g, int nt, std::uint64_t default_seed) {
  const PresetCall call = parse_preset(spec);
  auto amp_seed = [&](double& amp, std::uint64_t& seed) {
    if (call.args.empty() || call.args.size() > 2) throw Error("control preset " + call.name + ": expected 1..2 arguments");
    amp = to_double(call.name, call.args[0]);
    seed = call.args.size() > 1 ? static_cast<std::uint64_t>(to_int(call.name, call.args[1])) : default_seed;
  };
  if (call.name == "zero") return zero_control(g, nt);
  if (call.name == "random" || call.name == "forcing") {
    double amp = 0.0;
    std::uint64_t seed = 0;
    amp_seed(amp, seed);
    return call.name == "random" ? smooth_random_control(g, nt, amp, seed) : smooth_random_forcing(g, nt, amp, seed);
  }
  if (call.name == "file") {
    if (call.args.size() != 1) throw Error("control preset file: expected a path");
    CheckpointHeader h;
    VectorSeries v = read_control(call.args[0], &h);
    if (static_cast<int>(h.nx) != g.nx || static_cast<int>(h.ny) != g.ny || static_cast<int>(v.size()) != nt) {
      throw GridMismatch(call.args[0] + ": control container does not match grid/nt");
    }
    return v;
  }
  throw Error("unknown control preset '" + call.name + "'");
}

ControlBounds make_bounds(const RunConfig& c, const Grid2D& g, int nt) {
  auto side = [&](const std::string& spec, const char* key) {
    double x = 0.0;
    if (bound_is_number(spec, x)) return ControlBounds::constant(g, nt, x, x).lower;
    try {
      return make_control(spec, g, nt, c.seed);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  };
  ControlBounds b;
  b.lower = side(c.bounds_lower, "bounds.lower");
  b.upper = side(c.bounds_upper, "bounds.upper");
  try {
    b.validate();
  } catch (const HypothesisViolation& e) {
    throw ConfigError("bounds.lower", e.what());
  }
  return b;
}

}  // namespace nchns
