#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nchns/checkpoint.hpp"
#include "nchns/commands.hpp"
#include "nchns/config.hpp"

using namespace nchns;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nchns_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST(Config, EchoOfDefaultsListsEveryKey) {
  const RunConfig c = parse_config_string("");
  const std::string echo = "\n" + echo_config(c);
  for (const auto& k : config_keys()) EXPECT_NE(echo.find("\n" + k + " = "), std::string::npos) << k;
  // dt is resolved to a number.
  EXPECT_GT(c.dt, 0.0);
  EXPECT_EQ(echo.find("= auto"), std::string::npos);
}

TEST(Config, RoundTripIsFieldForField) {
  const RunConfig a = parse_config_string(
      "grid.nx = 24\ntime.dt = 0.0123456789012345\nweights.gamma = 3.3e-4\ncheck.eps = 0.1, 0.03\n"
      "optimizer.policy = fixed\nadjoint.scheme = continuous\nkernel.family = newtonian\nseed = 77\n");
  const RunConfig b = parse_config_string(echo_config(a));
  EXPECT_EQ(echo_config(a), echo_config(b));
  EXPECT_EQ(b.nx, 24);
  EXPECT_EQ(b.dt, 0.0123456789012345);
  EXPECT_EQ(b.weights.gamma, 3.3e-4);
  EXPECT_EQ(b.check_eps, (std::vector<double>{0.1, 0.03}));
  EXPECT_EQ(b.optimizer.policy, StepPolicy::fixed);
  EXPECT_EQ(b.adjoint, AdjointScheme::continuous);
  EXPECT_EQ(b.seed, 77u);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(config_error_key("bounds.lower = 2\nbounds.upper = 1\n"), "bounds.lower");
  EXPECT_EQ(config_error_key("grid.nz = 3\n"), "grid.nz");
  EXPECT_EQ(config_error_key("grid.nx = many\n"), "grid.nx");
  EXPECT_EQ(config_error_key("time.nt = 4\ntime.nt = 5\n"), "time.nt");
  EXPECT_EQ(config_error_key("kernel.family = bessel\n"), "kernel.family");
  EXPECT_EQ(config_error_key("optimizer.armijo_c = 2\n"), "optimizer.armijo_c");
  EXPECT_EQ(config_error_key("viscosity.upper = 0.1\n"), "viscosity.upper");
  EXPECT_EQ(config_error_key("just some words\n"), "");
  EXPECT_THROW(parse_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, CommentsAndWhitespace) {
  const RunConfig c = parse_config_string("  # header\n\ngrid.nx=20   # trailing\n\tinitial.phi = uniform(0.2)\n");
  EXPECT_EQ(c.nx, 20);
  EXPECT_EQ(c.initial_phi, "uniform(0.2)");
}

TEST(Checkpoint, StateRoundTripIsBitExact) {
  const testutil::Setting s(8, 4);
  const auto solver = s.solver();
  const auto t = solver.run(smooth_random_control(s.g, 4, 1.0, 2), s.init());
  const fs::path dir = scratch("ckpt");
  write_state((dir / "s.bin").string(), t, s.scheme.dt);
  CheckpointHeader h;
  const StateTrajectory r = read_state((dir / "s.bin").string(), &h);
  EXPECT_EQ(h.magic, kStateMagic);
  EXPECT_EQ(h.nx, 8u);
  EXPECT_EQ(h.nt, 4u);
  EXPECT_EQ(h.dt, s.scheme.dt);
  EXPECT_EQ(h.lx, 16.0);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_EQ(r.phi[k].values, t.phi[k].values);
    EXPECT_EQ(r.u[k].ux, t.u[k].ux);
    EXPECT_EQ(r.u[k].uy, t.u[k].uy);
    EXPECT_EQ(r.pi[k].values, t.pi[k].values);
  }
  // 8 + 6*8 header bytes, then 5 levels of (cells + xfaces + yfaces + cells).
  const std::size_t per = 2 * s.g.ncells() + s.g.nxfaces() + s.g.nyfaces();
  EXPECT_EQ(fs::file_size(dir / "s.bin"), 56 + 5 * per * 8);
  const std::string bytes = slurp(dir / "s.bin");
  EXPECT_EQ(bytes.substr(0, 8), std::string("NCHNS1\0\0", 8));

  write_control((dir / "c.bin").string(), smooth_random_control(s.g, 4, 1.0, 2), s.scheme.dt);
  EXPECT_THROW(read_state((dir / "c.bin").string()), Error);
  const VectorSeries c = read_control((dir / "c.bin").string());
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(c[3].ux, smooth_random_control(s.g, 4, 1.0, 2)[3].ux);
}

TEST(Checkpoint, TruncatedFileIsAnError) {
  const fs::path dir = scratch("trunc");
  std::ofstream(dir / "t.bin", std::ios::binary) << "NCHNS1";
  EXPECT_THROW(read_state((dir / "t.bin").string()), Error);
}

TEST(Commands, SimulateIsDeterministicAndWritesArtifacts) {
  RunConfig c = parse_config_string("grid.nx = 12\ngrid.ny = 12\ntime.nt = 6\ncontrol.v = random(0.5)\n");
  std::ostringstream log;
  c.output_dir = scratch("sim_a").string();
  ASSERT_EQ(cmd_simulate(c, log), 0) << log.str();
  c.output_dir = scratch("sim_b").string();
  ASSERT_EQ(cmd_simulate(c, log), 0);
  for (const char* f : {"trajectory.bin", "diagnostics.csv", "config.resolved", "report.json"}) {
    const std::string a = slurp(fs::temp_directory_path() / "nchns_test_sim_a" / f);
    EXPECT_FALSE(a.empty()) << f;
    if (std::string(f) != "config.resolved") {
      EXPECT_EQ(a, slurp(fs::temp_directory_path() / "nchns_test_sim_b" / f)) << f;
    }
  }
  // The echo reproduces the run.
  const RunConfig back = parse_config(fs::temp_directory_path() / "nchns_test_sim_a" / "config.resolved");
  EXPECT_EQ(back.nx, 12);
  EXPECT_EQ(back.control, "random(0.5)");
  EXPECT_EQ(slurp(fs::temp_directory_path() / "nchns_test_sim_a" / "failures.jsonl"), "");
}

TEST(Commands, UniformRestStateGivesConstantDiagnostics) {
  RunConfig c = parse_config_string("grid.nx = 10\ngrid.ny = 10\ntime.nt = 5\ninitial.phi = uniform(0.1)\ninitial.u = zero\n");
  c.output_dir = scratch("uniform").string();
  std::ostringstream log;
  ASSERT_EQ(cmd_simulate(c, log), 0);
  std::ifstream in(fs::path(c.output_dir) / "diagnostics.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,time,mass,kinetic_energy,free_energy,max_div,max_u,min_phi,max_phi");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  ASSERT_EQ(rows.size(), 6u);
  // Columns mass .. max_phi stay at their initial values up to round-off.
  for (const auto& r : rows)
    for (std::size_t col = 2; col < r.size(); ++col) EXPECT_NEAR(r[col], rows[0][col], 1e-12) << col;
}

TEST(Commands, FailureRecordOnSolverError) {
  RunConfig c = parse_config_string("grid.nx = 10\ngrid.ny = 10\ntime.nt = 3\ntime.cfl_fraction = 5\n");
  c.output_dir = scratch("cfl").string();
  std::ostringstream log;
  EXPECT_EQ(run_command("simulate", c, log), 1);
  const std::string rec = slurp(fs::path(c.output_dir) / "failures.jsonl");
  EXPECT_NE(rec.find("\"suggested_dt\""), std::string::npos) << rec;
  EXPECT_EQ(run_command("frobnicate", c, log), 2);
}

TEST(Commands, ValidateDefaultPasses) {
  RunConfig c = parse_config_string("grid.nx = 16\ngrid.ny = 16\n");
  c.output_dir = scratch("validate").string();
  std::ostringstream log;
  EXPECT_EQ(cmd_validate(c, log), 0) << log.str();
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "report.json"));
}

TEST(Config, AutoStabilizationTracksC4AndExplicitDtMustBePositive) {
  const RunConfig c = parse_config_string("potential.c4 = 1.5\n");
  EXPECT_DOUBLE_EQ(c.stabilization, 3.0);
  EXPECT_DOUBLE_EQ(parse_config_string("time.stabilization = 0.5\n").stabilization, 0.5);
  EXPECT_DOUBLE_EQ(parse_config_string("time.dt = auto\n").dt, c.dt);
  try {
    parse_config_string("time.dt = 0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "time.dt");
  }
}
