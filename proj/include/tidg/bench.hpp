#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tidg/analysis.hpp"
#include "tidg/assembly.hpp"
#include "tidg/material.hpp"
#include "tidg/mesh.hpp"

namespace tidg {

/// The eight discretizations compared in the benchmarks: P1_CG, P2_CG and
/// P1_{NIPG,SIPG,IIPG} with and without under-integration of the beta term.
std::vector<MethodConfig> all_method_variants(const StabilizationParams& stab = {});

/// Accepts the canonical names ("P1_SIPG_UI", "P2_CG") and the short forms
/// "cg1", "cg2", "nipg", "sipg_ui", ... (case-insensitive). Throws
/// Error(ConfigError) otherwise.
MethodConfig parse_method(const std::string& name, const StabilizationParams& stab = {});

/// Materials used by the benchmarks: nu_t = nu_l = nu, mu_l = q mu_t.
EngineeringConstants bench_constants(double E_t, double p, double nu, double q = 1.0);

struct BeamSelfCheck {
  double strain = 0.0;    // max |eps(u) - S sigma| / max |S sigma| over 50 random points
  double boundary = 0.0;  // max |u(0,y) - g(y)| / displacement scale
  double traction = 0.0;  // max |sigma(u) n - load(y)| / t on x = L
  bool passed(double tol = 1e-11) const { return strain <= tol && boundary <= tol && traction <= tol; }
};

/// Pure-bending state of the cantilever: sigma_11 = -(2t/H) y, all other
/// stresses zero. Displacements come from integrating S sigma with
/// u(0,y) = g(y) = -(t/H) S31 (y^2 - H^2/4) and v(0,-H/2) = 0.
struct BeamSolution {
  ExactSolution field;
  Mat3 compliance;
  double t = 0.0, L = 0.0, H = 0.0;
  double slope = 0.0;  // sigma_11 = slope * y
  BeamSelfCheck check;

  double g(double y) const;
  Vec2 end_load(double y) const { return {slope * y, 0.0}; }
};

/// Throws Error(SingularMatrix) if the plane-strain stiffness is singular.
BeamSolution beam_exact_solution(const MaterialParams& material, const FiberDirection& fiber, double t, double L,
                                 double H);

/// A fully specified boundary value problem on one mesh.
struct Problem {
  std::string benchmark;
  std::shared_ptr<const Mesh> mesh;
  MaterialParams material;
  FiberDirection fiber{0.0};
  LoadSpec loads;
  Vec2 tip = Vec2::Zero();
  std::optional<BeamSolution> exact;
};

/// Cook's membrane on an n x n grid: clamped at x = 0, uniform vertical
/// traction density t on x = 48, tip C = (48, 60).
Problem cook_problem(int n, const MaterialParams& material, const FiberDirection& fiber, double t = 100.0);

/// Beam (0,L) x (-H/2,H/2) with (10,2)*2^level cells: u = g on x = 0,
/// v(0,-H/2) = 0, end load on x = L, tip C = (L, H/2).
Problem beam_problem(int level, const MaterialParams& material, const FiberDirection& fiber, double t = 3000.0,
                     double L = 10.0, double H = 2.0);

struct RunRecord {
  std::string benchmark;
  std::string method;
  double p = 0.0;
  double angle = 0.0;
  double nu = 0.0;
  int level = 0;
  double h = 0.0;
  long ndof = 0;
  double tip_uy = 0.0;
  double dg_err = std::numeric_limits<double>::quiet_NaN();
  double h1_rel_err = std::numeric_limits<double>::quiet_NaN();
  double l2_err = std::numeric_limits<double>::quiet_NaN();  // absolute, not in the CSV
  double rate = std::numeric_limits<double>::quiet_NaN();
  // Not part of the CSV.
  bool ok = true;
  std::string error;
  double seconds = 0.0;
  double residual = 0.0;
};

/// Assembles, solves and post-processes one problem. The tip value of a DG
/// field is the mean over the elements that share the tip vertex.
/// The coefficient vector is stored in *solution when given.
RunRecord run_problem(const Problem& problem, const MethodConfig& config, double tol = 1e-10,
                      std::shared_ptr<const DiscreteField>* solution = nullptr);

/// Vertical displacement at a vertex (element mean for DG fields).
double vertex_uy(const DiscreteField& field, const Vec2& point);

struct SweepConfig {
  std::vector<MethodConfig> methods;
  std::vector<double> p;
  std::vector<double> angles;
  double nu = 0.49995;
  double q = 1.0;
  double E_t = 0.0;  // 0: benchmark default (250 Cook, 1500 beam)
  double t = 0.0;    // 0: benchmark default (100 Cook, 3000 beam)
  std::vector<int> levels;  // Cook: grid sizes n; beam: refinement levels
  double tol = 1e-10;
  bool serial = false;
};

struct SweepResult {
  std::vector<RunRecord> records;  // sorted by (method, p, angle, level)
  std::vector<std::string> skipped;  // stability violations, one line each
  double seconds = 0.0;
};

/// Defaults: all eight methods, p in {1..5} and a 12-per-decade grid over
/// [10, 1e5], angles {pi/3, 3pi/4}, n = 32.
SweepConfig cook_defaults();
/// Defaults: all eight methods, p in {1.0001, 3, 1e4}, angles
/// {pi/8, pi/3, 5pi/6}, levels 0..4.
SweepConfig beam_defaults();
/// Orientation sweep for Cook's membrane: p = 1e5, angles k pi/24, k = 0..24.
SweepConfig cook_orientation_defaults();

SweepResult run_cook(const SweepConfig& config);
/// Also fills dg_err, h1_rel_err and the H^1 rate between consecutive
/// levels, and adds an "Exact" tip row per (p, angle, level).
SweepResult run_beam(const SweepConfig& config);

/// CSV with header
/// `benchmark,method,p,angle,nu,level,h,ndof,tip_uy,dg_err,h1_rel_err,rate`.
std::string records_to_csv(const std::vector<RunRecord>& records);

/// Runs fn(i) for i in [0, n), on worker threads unless serial. Each index
/// is handled exactly once; exceptions are rethrown after joining.
void parallel_for(int n, bool serial, const std::function<void(int)>& fn);

}  // namespace tidg
