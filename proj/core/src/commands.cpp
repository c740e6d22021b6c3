#include "nchns/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>

#include "json.hpp"
#include "nchns/checkpoint.hpp"
#include "nchns/error.hpp"
#include "nchns/operators.hpp"

namespace nchns {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Full precision, locale independent.
std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Run {
 public:
  Run(const RunConfig& cfg, std::string command, std::ostream& log)
      : command_(std::move(command)), log_(log), dir_(cfg.output_dir) {
    fs::create_directories(dir_);
    std::ofstream(path("failures.jsonl"), std::ios::trunc);
    std::ofstream(path("config.resolved"), std::ios::trunc) << echo_config(cfg);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::ostream& log() { return log_; }

  /// Records a check result; returns `ok`.
  bool check(const std::string& name, bool ok, json detail = json::object()) {
    log_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) log_ << "  " << detail.dump();
    log_ << '\n';
    checks_[name] = {{"pass", ok}, {"detail", detail}};
    if (!ok) {
      failed_ = true;
      fail_record(name, detail);
    }
    return ok;
  }

  void fail_record(const std::string& name, const json& detail) {
    json rec = {{"command", command_}, {"check", name}, {"detail", detail}};
    std::ofstream(path("failures.jsonl"), std::ios::app) << rec.dump() << '\n';
  }

  void write_report(json extra = json::object()) {
    extra["command"] = command_;
    extra["pass"] = !failed_;
    extra["checks"] = checks_;
    std::ofstream(path("report.json"), std::ios::trunc) << std::setw(2) << extra << '\n';
  }

  int status() const { return failed_ ? 1 : 0; }

 private:
  std::string command_;
  std::ostream& log_;
  fs::path dir_;
  json checks_ = json::object();
  bool failed_ = false;
};

json hypothesis_json(const HypothesisReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"name", c.name}, {"pass", c.pass}, {"worst_s", c.worst_s}, {"worst_margin", c.worst_margin}});
  }
  return {{"s_min", r.s_min}, {"s_max", r.s_max}, {"samples", r.samples}, {"min_a", r.min_a}, {"conditions", conds}};
}

json taylor_json(const TaylorReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    rows.push_back({{"eps", r.eps[i]}, {"remainder", r.remainder[i]}, {"used", static_cast<bool>(r.used[i])}});
  }
  return {{"slope", r.slope}, {"derivative", r.derivative}, {"rows", rows}};
}

void write_taylor_csv(const std::string& p, const TaylorReport& r) {
  std::ofstream out(p, std::ios::trunc);
  out << "eps,remainder,used\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    out << num(r.eps[i]) << ',' << num(r.remainder[i]) << ',' << (r.used[i] ? 1 : 0) << '\n';
  }
}

// Everything a solve needs, built after the structural checks pass.
struct Setup {
  Grid2D grid;
  std::optional<ForwardSolver> solver;
  InitialData init;
};

// The structural hypotheses must hold before any solve starts.
std::unique_ptr<Setup> prepare(const RunConfig& cfg, Run& run) {
  auto s = std::make_unique<Setup>(make_grid(cfg), std::nullopt, InitialData{});
  const PhysicsParams phys = make_physics(cfg);
  Kernel k = make_kernel(cfg, s->grid);
  const HypothesisReport h2 = validate_H2(phys.potential, k, phys.constants);
  const HypothesisReport h3 = validate_H3(phys.viscosity);
  bool ok = run.check("H2", h2.pass(), hypothesis_json(h2));
  ok = run.check("H3", h3.pass(), hypothesis_json(h3)) && ok;
  const AdmissibilityReport adm = check_admissibility(k, 4, static_cast<unsigned>(cfg.seed));
  ok = run.check("kernel_admissible", adm.pass(),
                 {{"symmetry_defect", adm.symmetry_defect}, {"min_a", adm.min_a}}) && ok;
  if (!ok) return nullptr;
  s->solver.emplace(s->grid, std::move(k), phys, make_scheme(cfg, s->grid));
  s->init = make_initial_data(cfg, s->grid);
  s->solver->validate_initial_data(s->init);
  return s;
}

Targets make_targets(const RunConfig& cfg, const Setup& s, const ControlBounds& bounds) {
  const int nt = s.solver->scheme().nt;
  if (cfg.targets_source == "zero") return Targets::zeros(s.grid, nt);
  VectorSeries vt = make_control(cfg.targets_control, s.grid, nt, cfg.seed);
  if (cfg.targets_clip) vt = project_box(vt, bounds);
  return Targets::from_trajectory(s.solver->run(vt, s.init));
}

ControlProblem make_problem(const RunConfig& cfg, const Setup& s) {
  ControlProblem pb;
  pb.solver = &*s.solver;
  pb.init = s.init;
  pb.bounds = make_bounds(cfg, s.grid, s.solver->scheme().nt);
  pb.targets = make_targets(cfg, s, pb.bounds);
  pb.weights = cfg.weights;
  pb.adjoint = cfg.adjoint;
  return pb;
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << "step,time,mass,kinetic_energy,free_energy,max_div,max_u,min_phi,max_phi\n";
  for (const auto& r : rows) {
    out << r.step << ',' << num(r.time) << ',' << num(r.mass) << ',' << num(r.kinetic_energy) << ','
        << num(r.free_energy) << ',' << num(r.max_div) << ',' << num(r.max_u) << ',' << num(r.min_phi) << ','
        << num(r.max_phi) << '\n';
  }
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, "validate", log);
  const Grid2D g = make_grid(cfg);
  const PhysicsParams phys = make_physics(cfg);
  const Kernel k = make_kernel(cfg, g);
  const HypothesisReport h2 = validate_H2(phys.potential, k, phys.constants);
  const HypothesisReport h3 = validate_H3(phys.viscosity);
  run.check("H2", h2.pass(), hypothesis_json(h2));
  run.check("H3", h3.pass(), hypothesis_json(h3));
  const double floor = phys.potential.concavity() + phys.constants.c1;
  run.check("min_a", k.min_a() >= floor * (1.0 - 1e-12), {{"min_a", k.min_a()}, {"required", floor}});
  const AdmissibilityReport adm = check_admissibility(k, 16, static_cast<unsigned>(cfg.seed));
  run.check("kernel_symmetric", adm.symmetric && adm.grad_antisymmetric,
            {{"symmetry_defect", adm.symmetry_defect}});
  run.check("a_nonnegative", adm.a_nonnegative, {{"min_a", adm.min_a}, {"max_a", adm.max_a}});
  run.check("gradient_bound_finite", std::isfinite(adm.gradient_bound),
            {{"gradient_bound", adm.gradient_bound}, {"samples", adm.samples}});
  run.write_report({{"family", to_string(k.family())}, {"amplitude", k.amplitude()}});
  return run.status();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, "simulate", log);
  auto s = prepare(cfg, run);
  if (!s) return run.status();
  const VectorSeries v = make_control(cfg.control, s->grid, cfg.nt, cfg.seed);
  const StateTrajectory traj = s->solver->run(v, s->init);
  const auto rows = diagnostics(*s->solver, traj);
  write_state(run.path("trajectory.bin"), traj, s->solver->scheme().dt);
  write_diagnostics_csv(run.path("diagnostics.csv"), rows);

  double mass_drift = 0.0, max_div = 0.0;
  for (const auto& r : rows) {
    mass_drift = std::max(mass_drift, std::abs(r.mass - rows[0].mass));
    max_div = std::max(max_div, r.max_div);
  }
  const double mass_scale = std::max(std::abs(rows[0].mass), integral(ScalarField(s->grid, 1.0)));
  run.check("mass_conserved", mass_drift <= 1e-10 * mass_scale, {{"max_drift", mass_drift}});
  run.check("divergence_free", max_div <= 1e-9, {{"max_div", max_div}});
  run.check("finite", std::isfinite(rows.back().total_energy()), {{"final_energy", rows.back().total_energy()}});
  run.write_report({{"nt", traj.nt()}, {"dt", s->solver->scheme().dt}});
  return run.status();
}

int cmd_tangent_check(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, "tangent-check", log);
  auto s = prepare(cfg, run);
  if (!s) return run.status();
  const VectorSeries v = make_control(cfg.control, s->grid, cfg.nt, cfg.seed);
  const VectorSeries h = make_control(cfg.check_direction, s->grid, cfg.nt, cfg.seed);
  const TaylorReport r = tangent_taylor_test(*s->solver, s->init, v, h, cfg.check_eps);
  const StateTrajectory traj = s->solver->run(v, s->init);
  write_tangent(run.path("tangent.bin"), run_tangent(*s->solver, traj, h), s->solver->scheme().dt);
  write_taylor_csv(run.path("tangent_taylor.csv"), r);
  run.check("remainder_slope", r.pass, taylor_json(r));
  run.write_report();
  return run.status();
}

int cmd_gradient_check(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, "gradient-check", log);
  auto s = prepare(cfg, run);
  if (!s) return run.status();
  const ControlProblem pb = make_problem(cfg, *s);
  const double dt = pb.dt();
  const VectorSeries v = make_control(cfg.control, s->grid, cfg.nt, cfg.seed);
  const VectorSeries h = make_control(cfg.check_direction, s->grid, cfg.nt, cfg.seed);

  const TaylorReport r = taylor_test(pb, v, h, cfg.check_eps);
  write_taylor_csv(run.path("taylor.csv"), r);
  run.check("taylor_slope", r.pass, taylor_json(r));

  const StateTrajectory traj = s->solver->run(v, s->init);
  const AdjointTrajectory adj = run_adjoint(*s->solver, traj, pb.targets, pb.weights, cfg.adjoint);
  write_adjoint(run.path("adjoint.bin"), adj, dt);
  const double via_adjoint = inner_product_lq(reduced_gradient(v, adj, pb.weights.gamma), h, dt);
  const TangentTrajectory tan = run_tangent(*s->solver, traj, h);
  const double via_tangent = directional_derivative_via_tangent(traj, tan, pb.targets, pb.weights, v, h, dt);
  const double gap = std::abs(via_adjoint - via_tangent) / std::max(std::abs(via_tangent), 1e-300);
  run.check("duality_gap", gap <= cfg.check_duality_tol,
            {{"scheme", to_string(cfg.adjoint)},
             {"adjoint", via_adjoint},
             {"tangent", via_tangent},
             {"relative_gap", gap},
             {"tol", cfg.check_duality_tol}});
  run.write_report();
  return run.status();
}

int cmd_optimize(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, "optimize", log);
  auto s = prepare(cfg, run);
  if (!s) return run.status();
  const ControlProblem pb = make_problem(cfg, *s);
  const double dt = pb.dt();
  const VectorSeries v0 = make_control(cfg.control, s->grid, cfg.nt, cfg.seed);

  std::ofstream csv(run.path("optimization_log.csv"), std::ios::trunc);
  csv << "iter,J,grad_norm,kkt_residual,tau_accepted,armijo_shrinks\n";
  const OptimizerState st = projected_gradient_descent(pb, v0, cfg.optimizer, [&](const IterationRecord& r) {
    csv << r.iter << ',' << num(r.J) << ',' << num(r.grad_norm) << ',' << num(r.kkt) << ',' << num(r.tau) << ','
        << r.shrinks << '\n';
    if (r.iter % 10 == 0) run.log() << "iter " << r.iter << "  J " << r.J << "  kkt " << r.kkt << '\n';
  });
  csv.close();
  write_control(run.path("control.bin"), st.v, dt);
  write_state(run.path("trajectory.bin"), st.traj, dt);

  bool monotone = true;
  for (std::size_t i = 1; i < st.history.size(); ++i) monotone = monotone && st.history[i].J <= st.history[i - 1].J;
  bool feasible = true;
  double post_clip_div = 0.0;
  for (std::size_t k = 0; k < st.v.size(); ++k) {
    for (std::size_t i = 0; i < st.v[k].ux.size(); ++i)
      feasible = feasible && st.v[k].ux[i] >= pb.bounds.lower[k].ux[i] && st.v[k].ux[i] <= pb.bounds.upper[k].ux[i];
    for (std::size_t i = 0; i < st.v[k].uy.size(); ++i)
      feasible = feasible && st.v[k].uy[i] >= pb.bounds.lower[k].uy[i] && st.v[k].uy[i] <= pb.bounds.upper[k].uy[i];
    post_clip_div = std::max(post_clip_div, max_abs(divergence_face_to_cc(st.v[k])));
  }
  const ComplementarityReport c = check_complementarity(st.v, st.g, pb.bounds, cfg.check_complementarity_tol);

  run.check("cost_monotone", monotone);
  run.check("feasible", feasible);
  run.check("line_search", st.status != OptimizerStatus::line_search_failed || c.pass(),
            {{"status", to_string(st.status)}});
  run.check("complementarity", c.pass(),
            {{"worst_free", c.worst_free},
             {"worst_lower", c.worst_lower},
             {"worst_upper", c.worst_upper},
             {"free", c.free_count},
             {"lower", c.lower_count},
             {"upper", c.upper_count},
             {"tol", c.tol}});
  run.write_report({{"status", to_string(st.status)},
                    {"iterations", st.iterations},
                    {"J0", st.history.front().J},
                    {"J", st.history.back().J},
                    {"kkt", st.history.back().kkt},
                    {"control_max_div", post_clip_div}});
  return run.status();
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  int (*fn)(const RunConfig&, std::ostream&) = nullptr;
  if (name == "simulate") fn = cmd_simulate;
  else if (name == "tangent-check") fn = cmd_tangent_check;
  else if (name == "gradient-check") fn = cmd_gradient_check;
  else if (name == "optimize") fn = cmd_optimize;
  else if (name == "validate") fn = cmd_validate;
  if (!fn) {
    log << "unknown command '" << name << "'\n";
    return 2;
  }
  try {
    return fn(cfg, log);
  } catch (const Error& e) {
    json rec = {{"command", name}, {"check", "exception"}, {"error", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) rec["key"] = ce->key();
    if (const auto* sf = dynamic_cast<const SolverFailure*>(&e)) rec["step"] = sf->step();
    if (const auto* cv = dynamic_cast<const CflViolation*>(&e)) {
      rec["step"] = cv->step();
      rec["suggested_dt"] = cv->suggested_dt();
    }
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    std::ofstream((fs::path(cfg.output_dir) / "failures.jsonl").string(), std::ios::app) << rec.dump() << '\n';
    log << "FAIL " << name << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nchns
