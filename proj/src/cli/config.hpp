#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "tidg/assembly.hpp"
#include "tidg/bench.hpp"

namespace tidg::cli {

inline constexpr int kSchemaVersion = 1;

/// One run or sweep. Empty lists fall back to the benchmark defaults.
struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string benchmark = "cook";  // "cook" or "beam"
  std::vector<std::string> methods;
  std::vector<double> p;
  std::vector<double> angles;
  double nu = 0.49995;
  double q = 1.0;
  double E_t = 0.0;  // 0: benchmark default
  double t = 0.0;    // 0: benchmark default
  std::vector<int> levels;
  StabilizationParams stab;
  bool underintegrate = false;
  bool ui_extra_mu = false;  // extra k_mu mu_t jump penalty in UI variants
  std::string out = "out";
  bool serial = false;
  double tol = 1e-10;
  bool dump_field = false;
};

/// Angle literal: a number, or a multiple/fraction of pi such as "pi/3",
/// "3pi/4", "3*pi/4", "-pi". Throws Error(ConfigError).
double parse_angle(const std::string& text);

/// Validates and converts. Unknown keys, wrong types and bad values raise
/// Error(ConfigError).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical echo; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);

/// Method list with --underintegrate applied to the DG entries.
std::vector<MethodConfig> resolve_methods(const RunConfig& c);

/// Sweep grid with benchmark defaults filled in.
SweepConfig to_sweep(const RunConfig& c);

}  // namespace tidg::cli
