#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using nlohmann::json;
using namespace tidg;
using namespace tidg::cli;

namespace {

struct Overrides {
  std::string config;
  std::string benchmark;
  std::string methods;
  std::string p;
  std::string angles;
  std::string levels;
  double nu = 0.0;
  std::string out;
  double tol = 0.0;
  bool underintegrate = false;
  bool ui_extra_mu = false;
  bool serial = false;
  bool dump_field = false;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_number(const std::string& s, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigError, std::string("bad value '") + s + "' for " + flag);
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file (schema_version 1)");
  cmd->add_option("--benchmark", o.benchmark, "cook | beam (default cook)");
  cmd->add_option("--method", o.methods,
                  "Comma-separated methods: P1_CG, P2_CG, P1_NIPG, P1_SIPG, P1_IIPG, with _UI suffix for "
                  "under-integration (default: all eight for sweep, P1_SIPG for solve)");
  cmd->add_option("--p", o.p, "Comma-separated stiffness ratios E_l/E_t");
  cmd->add_option("--angle", o.angles, "Comma-separated fibre angles, e.g. pi/3,3pi/4 or 0.5");
  cmd->add_option("--nu", o.nu, "Poisson ratio nu_t = nu_l (default 0.49995)");
  cmd->add_option("--refine", o.levels, "Comma-separated levels: Cook grid size n (default 32), beam level (0..4)");
  cmd->add_flag("--underintegrate", o.underintegrate, "Under-integrate the beta penalty in every DG method");
  cmd->add_flag("--ui-extra-mu", o.ui_extra_mu,
                "Add the extra k_mu mu_t jump penalty to the under-integrated variants");
  cmd->add_flag("--serial", o.serial, "Run sweep cells one at a time (deterministic order)");
  cmd->add_option("--out", o.out, "Output directory (default out)");
  cmd->add_option("--tol", o.tol, "Solver tolerance (default 1e-10)");
  cmd->add_flag("--dump-field", o.dump_field, "solve: also write field.csv");
}

RunConfig build_config(const Overrides& o) {
  json j = json::object();
  if (!o.config.empty()) j = to_json(load_config(o.config));
  if (!o.benchmark.empty()) j["benchmark"] = o.benchmark;
  if (!o.methods.empty()) j["methods"] = split(o.methods);
  if (!o.p.empty()) {
    json list = json::array();
    for (const auto& s : split(o.p)) list.push_back(to_number(s, "--p"));
    j["p"] = list;
  }
  if (!o.angles.empty()) {
    json list = json::array();
    for (const auto& s : split(o.angles)) list.push_back(parse_angle(s));
    j["angles"] = list;
  }
  if (!o.levels.empty()) {
    json list = json::array();
    for (const auto& s : split(o.levels)) list.push_back(static_cast<int>(to_number(s, "--refine")));
    j["levels"] = list;
  }
  if (o.nu != 0.0) j["nu"] = o.nu;
  if (!o.out.empty()) j["out"] = o.out;
  if (o.tol != 0.0) j["tol"] = o.tol;
  if (o.underintegrate) j["underintegrate"] = true;
  if (o.ui_extra_mu) j["ui_extra_mu"] = true;
  if (o.serial) j["serial"] = true;
  if (o.dump_field) j["dump_field"] = true;
  return parse_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Plane-strain transversely isotropic elasticity: conforming P1/P2 and interior-penalty DG "
      "(NIPG/SIPG/IIPG) with optional under-integration of the beta penalty.\n"
      "Defaults: k_mu = k_alpha = k_gamma = 10, k_lambda = k_beta = 100, nu = 0.49995, q = 1.\n"
      "Exit codes: 0 ok, 1 numerical failure, 2 configuration error, 3 unstable material."};
  app.require_subcommand(1);
  Overrides solve_opts, sweep_opts;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run one benchmark cell");
  add_run_options(solve_cmd, solve_opts);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a Cartesian sweep and write CSV + manifest");
  add_run_options(sweep_cmd, sweep_opts);
  app.add_subcommand("verify", "Run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(build_config(solve_opts), std::cout, std::cerr);
    if (sweep_cmd->parsed()) return cmd_sweep(build_config(sweep_opts), std::cout, std::cerr);
    return cmd_verify(std::cout);
  } catch (const Error& e) {
    std::cerr << error_json(e.code(), e.what()) << "\n";
    return exit_code_for(e.code());
  }
}
