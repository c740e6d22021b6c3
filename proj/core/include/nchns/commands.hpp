#pragma once

// Command entry points. Each writes its artifacts plus config.resolved into
// cfg.output_dir and returns 0 iff every check of the protocol passed.
// Failed checks are appended to failures.jsonl, one JSON object per line.
//
//   simulate        trajectory.bin, diagnostics.csv
//   tangent-check   tangent.bin, tangent_taylor.csv, report.json
//   gradient-check  adjoint.bin, taylor.csv, report.json
//   optimize        optimization_log.csv, control.bin, trajectory.bin, report.json
//   validate        report.json

#include <ostream>
#include <string>

#include "nchns/config.hpp"

namespace nchns {

int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_tangent_check(const RunConfig& cfg, std::ostream& log);
int cmd_gradient_check(const RunConfig& cfg, std::ostream& log);
int cmd_optimize(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

/// Dispatch by name ("simulate", "tangent-check", ...). Library errors are
/// turned into a failure record and exit status 1; unknown names give 2.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

/// Diagnostics rows as CSV with a header line.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows);

}  // namespace nchns
