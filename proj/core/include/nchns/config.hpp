#pragma once

// Run configuration: flat "section.key = value" text, '#' starts a comment.
// Unknown keys, malformed lines and out-of-range values raise ConfigError
// naming the key. echo_config writes every effective value back in the same
// syntax, so parse_config_string(echo_config(c)) reproduces c.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nchns/adjoint.hpp"
#include "nchns/control.hpp"
#include "nchns/forward.hpp"
#include "nchns/nonlocal.hpp"
#include "nchns/optimizer.hpp"
#include "nchns/physics.hpp"

namespace nchns {

struct RunConfig {
  // grid
  int nx = 32, ny = 32;
  double lx = 16.0, ly = 16.0;

  // time; "auto" (NaN here) resolves on parse: dt to cfl_fraction times the
  // diffusive limit, stabilization to 2 c4
  double dt = std::numeric_limits<double>::quiet_NaN();
  double cfl_fraction = 1.0;
  int nt = 50;
  double stabilization = std::numeric_limits<double>::quiet_NaN();
  double tol_p = 1e-10;
  bool enforce_cfl = true;

  // kernel
  std::string kernel_family = "gaussian";  // gaussian | newtonian
  double kernel_amplitude = 1.0;
  double kernel_sigma = 1.0;
  double kernel_core_radius = 0.5;
  bool kernel_auto_scale = true;

  HypothesisConstants constants;
  Potential potential;
  Viscosity viscosity;

  std::string initial_phi = "bubble(4, 8, 8, 1)";
  std::string initial_u = "taylor-vortex(0.5)";
  /// zero | random(amplitude[, seed]) | file(path)
  std::string control = "zero";

  /// zero | control: targets are the trajectory of targets_control.
  std::string targets_source = "control";
  std::string targets_control = "random(1.5, 99)";
  bool targets_clip = true;  // clip the generating control into the bounds

  CostWeights weights;
  /// Number or file(path) to a control container.
  std::string bounds_lower = "-1";
  std::string bounds_upper = "1";

  OptimizerOptions optimizer;

  /// Direction for Taylor and duality checks, a control spec (forcing(...) is
  /// not divergence-free, so it also exercises the projection).
  std::string check_direction = "forcing(1.0, 3)";
  std::vector<double> check_eps = {1e-1, 1e-2, 1e-3, 1e-4};
  double check_duality_tol = 2e-2;
  double check_complementarity_tol = 1e-6;

  AdjointScheme adjoint = AdjointScheme::discrete;
  std::string output_dir = "out";
  std::uint64_t seed = 1234;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_string(const std::string& text);
/// Resolved config with every key; dt is written as the resolved number.
std::string echo_config(const RunConfig& c);
/// Every recognized key, in echo order.
std::vector<std::string> config_keys();

/// Cross-field checks (bounds ordering, positivity, hypothesis constants).
void validate_config(const RunConfig& c);

// Builders shared by the commands and tests.
Grid2D make_grid(const RunConfig& c);
PhysicsParams make_physics(const RunConfig& c);
Kernel make_kernel(const RunConfig& c, const Grid2D& g);
TimeScheme make_scheme(const RunConfig& c, const Grid2D& g);
InitialData make_initial_data(const RunConfig& c, const Grid2D& g);
/// Control series from a spec (zero | random(amplitude[, seed]) | file(path)).
VectorSeries make_control(const std::string& spec, const Grid2D& g, int nt, std::uint64_t default_seed);
ControlBounds make_bounds(const RunConfig& c, const Grid2D& g, int nt);

}  // namespace nchns
