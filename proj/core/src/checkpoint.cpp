#include "nchns/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "nchns/error.hpp"

namespace nchns {

namespace {

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ofstream& out, T v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(path + ": truncated checkpoint");
  return to_le(v);
}

void put_array(std::ofstream& out, const std::vector<double>& a) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  } else {
    for (double x : a) put(out, x);
  }
}

void get_array(std::ifstream& in, std::vector<double>& a, const std::string& path) {
  in.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  if (!in) throw Error(path + ": truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big)
    for (double& x : a) x = to_le(x);
}

CheckpointHeader header_for(const Grid2D& g, const char* magic, std::size_t nt, double dt) {
  CheckpointHeader h;
  h.magic = magic;
  h.nx = static_cast<std::uint64_t>(g.nx);
  h.ny = static_cast<std::uint64_t>(g.ny);
  h.nt = nt;
  h.dt = dt;
  h.lx = g.lx;
  h.ly = g.ly;
  return h;
}

}  // namespace

void write_container(const std::string& path, const CheckpointHeader& h, const std::vector<CheckpointRecord>& recs) {
  if (h.magic.size() > 8) throw Error("checkpoint magic longer than 8 bytes");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  char magic[8] = {};
  std::memcpy(magic, h.magic.data(), h.magic.size());
  out.write(magic, 8);
  put(out, h.nx);
  put(out, h.ny);
  put(out, h.nt);
  put(out, h.dt);
  put(out, h.lx);
  put(out, h.ly);
  for (const auto& r : recs) {
    put_array(out, r.scalar.values);
    put_array(out, r.vector.ux);
    put_array(out, r.vector.uy);
    put_array(out, r.pressure.values);
  }
  if (!out) throw Error("write failed: " + path);
}

std::vector<CheckpointRecord> read_container(const std::string& path, CheckpointHeader& h,
                                             const std::string& expected_magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in) throw Error(path + ": truncated checkpoint");
  h.magic.assign(magic, strnlen(magic, 8));
  if (!expected_magic.empty() && h.magic != expected_magic) {
    throw Error(path + ": expected magic " + expected_magic + ", found " + h.magic);
  }
  h.nx = get<std::uint64_t>(in, path);
  h.ny = get<std::uint64_t>(in, path);
  h.nt = get<std::uint64_t>(in, path);
  h.dt = get<double>(in, path);
  h.lx = get<double>(in, path);
  h.ly = get<double>(in, path);
  const Grid2D g(static_cast<int>(h.nx), static_cast<int>(h.ny), h.lx, h.ly);
  const std::size_t n = h.magic == kControlMagic ? h.nt : h.nt + 1;
  std::vector<CheckpointRecord> recs(n, CheckpointRecord{ScalarField(g), VectorField(g), ScalarField(g)});
  for (auto& r : recs) {
    get_array(in, r.scalar.values, path);
    get_array(in, r.vector.ux, path);
    get_array(in, r.vector.uy, path);
    get_array(in, r.pressure.values, path);
  }
  return recs;
}

void write_state(const std::string& path, const StateTrajectory& t, double dt) {
  std::vector<CheckpointRecord> recs;
  for (std::size_t k = 0; k < t.u.size(); ++k) recs.push_back({t.phi[k], t.u[k], t.pi[k]});
  write_container(path, header_for(t.u[0].grid, kStateMagic, t.u.size() - 1, dt), recs);
}

void write_tangent(const std::string& path, const TangentTrajectory& t, double dt) {
  std::vector<CheckpointRecord> recs;
  for (std::size_t k = 0; k < t.xi.size(); ++k) recs.push_back({t.eta[k], t.xi[k], t.pi[k]});
  write_container(path, header_for(t.xi[0].grid, kTangentMagic, t.xi.size() - 1, dt), recs);
}

void write_adjoint(const std::string& path, const AdjointTrajectory& t, double dt) {
  std::vector<CheckpointRecord> recs;
  for (std::size_t k = 0; k < t.p.size(); ++k) recs.push_back({t.q[k], t.p[k], t.pi[k]});
  write_container(path, header_for(t.p[0].grid, kAdjointMagic, t.p.size() - 1, dt), recs);
}

void write_control(const std::string& path, const VectorSeries& v, double dt) {
  if (v.empty()) throw Error("write_control: empty control");
  const Grid2D& g = v[0].grid;
  std::vector<CheckpointRecord> recs;
  for (const auto& f : v) recs.push_back({ScalarField(g), f, ScalarField(g)});
  write_container(path, header_for(g, kControlMagic, v.size(), dt), recs);
}

StateTrajectory read_state(const std::string& path, CheckpointHeader* header) {
  CheckpointHeader h;
  auto recs = read_container(path, h, kStateMagic);
  StateTrajectory t;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    t.times.push_back(static_cast<double>(k) * h.dt);
    t.phi.push_back(std::move(recs[k].scalar));
    t.u.push_back(std::move(recs[k].vector));
    t.pi.push_back(std::move(recs[k].pressure));
  }
  if (header) *header = h;
  return t;
}

VectorSeries read_control(const std::string& path, CheckpointHeader* header) {
  CheckpointHeader h;
  auto recs = read_container(path, h, kControlMagic);
  VectorSeries v;
  for (auto& r : recs) v.push_back(std::move(r.vector));
  if (header) *header = h;
  return v;
}

}  // namespace nchns
