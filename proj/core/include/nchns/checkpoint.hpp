#pragma once

// Binary trajectory containers.
//
//   8 bytes   magic, NUL padded ("NCHNS1", "NCHNT1", "NCHNA1", "NCHNC1")
//   3 x u64   nx, ny, nt                  little endian
//   3 x f64   dt, lx, ly                  little endian
//   records   scalar (nx*ny), ux ((nx+1)*ny), uy (nx*(ny+1)), pressure (nx*ny)
//
// State, tangent and adjoint files carry nt+1 records (levels 0..nt); the
// control file carries nt records (one per step slot) with zero scalar and
// pressure blocks.

#include <string>
#include <vector>

#include "nchns/adjoint.hpp"
#include "nchns/forward.hpp"
#include "nchns/tangent.hpp"

namespace nchns {

inline constexpr const char* kStateMagic = "NCHNS1";
inline constexpr const char* kTangentMagic = "NCHNT1";
inline constexpr const char* kAdjointMagic = "NCHNA1";
inline constexpr const char* kControlMagic = "NCHNC1";

struct CheckpointHeader {
  std::string magic;
  std::uint64_t nx = 0, ny = 0, nt = 0;
  double dt = 0.0, lx = 0.0, ly = 0.0;
};

struct CheckpointRecord {
  ScalarField scalar;
  VectorField vector;
  ScalarField pressure;
};

void write_container(const std::string& path, const CheckpointHeader& h, const std::vector<CheckpointRecord>& recs);
/// Reads and checks the magic when `expected_magic` is non-empty.
std::vector<CheckpointRecord> read_container(const std::string& path, CheckpointHeader& h,
                                             const std::string& expected_magic = "");

void write_state(const std::string& path, const StateTrajectory& t, double dt);
void write_tangent(const std::string& path, const TangentTrajectory& t, double dt);
void write_adjoint(const std::string& path, const AdjointTrajectory& t, double dt);
void write_control(const std::string& path, const VectorSeries& v, double dt);

/// Reads phi, u, pi (mu is left empty, times rebuilt from dt).
StateTrajectory read_state(const std::string& path, CheckpointHeader* header = nullptr);
VectorSeries read_control(const std::string& path, CheckpointHeader* header = nullptr);

}  // namespace nchns
