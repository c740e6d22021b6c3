#pragma once

// Named initial-data shapes and smooth random fields for tests and runs.
//
// Phase-field specs:  uniform(c) | random(amplitude, seed[, mean])
//                     | bubble(radius, cx, cy[, width]) | file(path)
// Velocity specs:     zero | taylor-vortex(amplitude) | file(path)
// file(path) reads raw little-endian float64 values in field layout.

#include <cstdint>
#include <string>
#include <vector>

#include "nchns/grid.hpp"

namespace nchns {

struct PresetCall {
  std::string name;
  std::vector<std::string> args;
};

/// Splits "name(a, b, c)" into name and trimmed arguments. Throws Error on
/// malformed input.
PresetCall parse_preset(const std::string& spec);

ScalarField make_phase_field(const std::string& spec, const Grid2D& g);
VectorField make_velocity(const std::string& spec, const Grid2D& g);

/// Discretely divergence-free, no-slip vortex from the node streamfunction
/// psi = A (lx/pi) sin^2(pi x/lx) sin^2(pi y/ly).
VectorField taylor_vortex(const Grid2D& g, double amplitude);
/// Velocity from an arbitrary node streamfunction (nnodes values, zero on
/// the boundary nodes for no-slip normal faces).
VectorField velocity_from_streamfunction(const Grid2D& g, const std::vector<double>& psi);

/// Smooth divergence-free random control series: a few low streamfunction
/// modes modulated by smooth random time profiles, scaled so max |v| = amplitude.
VectorSeries smooth_random_control(const Grid2D& g, int nt, double amplitude, std::uint64_t seed);
/// Smooth random face field that is not divergence-free (both components
/// drawn independently); boundary-normal faces are zero.
VectorSeries smooth_random_forcing(const Grid2D& g, int nt, double amplitude, std::uint64_t seed);

}  // namespace nchns
