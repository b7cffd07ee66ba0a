#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "tidg/errors.hpp"

namespace tidg::cli {

/// 0 success, 1 numerical failure, 2 configuration error, 3 unstable material.
int exit_code_for(ErrorCode code);

/// {"error": "<code>", "message": "<text>"} on one line.
std::string error_json(ErrorCode code, const std::string& message);

/// One (benchmark, method, p, angle, level) solve. Writes <out>/solve.csv,
/// <out>/manifest.json and, with dump_field, <out>/field.csv; prints a JSON
/// summary to `out`.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Cartesian sweep. Writes <out>/<benchmark>.csv and <out>/manifest.json;
/// beam sweeps also write one error report per series under
/// <out>/beam_convergence/.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

struct VerifyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Property checks on small built-in meshes.
std::vector<VerifyResult> run_verify_suite();

/// Prints the table; returns 0 iff every check passed.
int cmd_verify(std::ostream& out);

}  // namespace tidg::cli
