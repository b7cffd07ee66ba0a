#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cli/isotropic_reference.hpp"
#include "tidg/analysis.hpp"
#include "tidg/bench.hpp"
#include "tidg/io.hpp"
#include "tidg/solver.hpp"

#ifndef TIDG_VERSION
#define TIDG_VERSION "unknown"
#endif

namespace tidg::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidStabilization:
      return 2;
    case ErrorCode::StabilityViolation:
      return 3;
    default:
      return 1;
  }
}

std::string error_json(ErrorCode code, const std::string& message) {
  return json{{"error", to_string(code)}, {"message", message}}.dump();
}

namespace {

json record_json(const RunRecord& r) {
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  return json{{"benchmark", r.benchmark}, {"method", r.method},     {"p", r.p},
              {"angle", r.angle},         {"nu", r.nu},             {"level", r.level},
              {"h", r.h},                 {"ndof", r.ndof},         {"tip_uy", num(r.tip_uy)},
              {"dg_err", num(r.dg_err)},  {"h1_rel_err", num(r.h1_rel_err)},
              {"ok", r.ok},               {"error", r.error},       {"seconds", r.seconds},
              {"relative_residual", r.residual}};
}

json manifest_base(const RunConfig& config, const std::string& command) {
  return json{{"tool", "tidg"}, {"version", TIDG_VERSION}, {"command", command}, {"config", to_json(config)}};
}

template <class T>
T single(const std::vector<T>& values, const T& fallback, const char* what) {
  if (values.empty()) return fallback;
  if (values.size() > 1) {
    throw Error(ErrorCode::ConfigError, std::string("solve takes one ") + what + "; use sweep for lists");
  }
  return values.front();
}

std::string series_file_name(const RunRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s_p%.6g_a%.6f.csv", r.method.c_str(), r.p, r.angle);
  return buf;
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<MethodConfig> methods = resolve_methods(config);
    const MethodConfig method = config.methods.empty() ? parse_method("P1_SIPG", config.stab) : methods.front();
    if (!config.methods.empty() && methods.size() != 1) {
      throw Error(ErrorCode::ConfigError, "solve takes one method; use sweep for lists");
    }
    MethodConfig m = method;
    if (config.underintegrate && is_dg(m.method)) m.under_integrate_beta = true;
    m.ui_extra_mu_penalty = config.ui_extra_mu;
    const bool beam = config.benchmark == "beam";
    const double p = single(config.p, 1.0, "p");
    const double angle = single(config.angles, std::numbers::pi / 3.0, "angle");
    const int level = single(config.levels, beam ? 2 : 32, "level");
    const double E_t = config.E_t > 0.0 ? config.E_t : (beam ? 1500.0 : 250.0);
    const double t = config.t != 0.0 ? config.t : (beam ? 3000.0 : 100.0);

    const EngineeringConstants ec = bench_constants(E_t, p, config.nu, config.q);
    const StabilityReport st = stability_check(ec);
    const fs::path dir(config.out);
    json manifest = manifest_base(config, "solve");
    if (!st.passed()) {
      const std::string msg = "material p=" + format_double(p) + " nu=" + format_double(config.nu) +
                              " q=" + format_double(config.q) + " violates the stability conditions";
      manifest["status"] = "skipped";
      manifest["error"] = json::parse(error_json(ErrorCode::StabilityViolation, msg));
      write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
      err << error_json(ErrorCode::StabilityViolation, msg) << "\n";
      return exit_code_for(ErrorCode::StabilityViolation);
    }
    const MaterialParams material = derive_params(ec);
    const FiberDirection fiber(angle);
    const Problem problem = beam ? beam_problem(level, material, fiber, t) : cook_problem(level, material, fiber, t);

    std::shared_ptr<const DiscreteField> field;
    RunRecord rec = run_problem(problem, m, config.tol, &field);
    rec.p = p;
    rec.nu = config.nu;
    rec.level = level;

    const AdmissibilityReport adm = check_coercivity_params(m, material);
    json summary = record_json(rec);
    summary["admissible"] = adm.admissible();
    summary["admissibility_notes"] = adm.notes;

    write_file_atomic(dir / "solve.csv", records_to_csv({rec}));
    if (config.dump_field) {
      std::ostringstream os;
      os << "element,local,x,y,ux,uy\n";
      const Mesh& mesh = field->space().mesh();
      for (int e = 0; e < mesh.num_triangles(); ++e) {
        const auto pts = mesh.triangle_points(e);
        for (int j = 0; j < 3; ++j) {
          const Vec2 u = field->value(e, pts[j]);
          os << e << ',' << j << ',' << format_double(pts[j].x()) << ',' << format_double(pts[j].y()) << ','
             << format_double(u.x()) << ',' << format_double(u.y()) << '\n';
        }
      }
      write_file_atomic(dir / "field.csv", os.str());
    }
    manifest["status"] = "ok";
    manifest["result"] = summary;
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    out << summary.dump() << "\n";
    return 0;
  } catch (const Error& e) {
    err << error_json(e.code(), e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const SweepConfig sweep = to_sweep(config);
    const bool beam = config.benchmark == "beam";
    const SweepResult result = beam ? run_beam(sweep) : run_cook(sweep);
    const fs::path dir(config.out);

    // Single writer: everything below runs after the workers have joined.
    write_file_atomic(dir / (config.benchmark + ".csv"), records_to_csv(result.records));
    json failures = json::array();
    json timings = json::array();
    std::map<std::string, ErrorReport> series;
    std::map<std::string, std::string> series_name;
    for (const RunRecord& r : result.records) {
      if (!r.ok) failures.push_back(record_json(r));
      if (r.method != "Exact") timings.push_back({{"method", r.method}, {"p", r.p}, {"angle", r.angle},
                                                  {"level", r.level}, {"seconds", r.seconds}});
      if (beam && r.ok && r.method != "Exact") {
        const std::string key = series_file_name(r);
        ErrorRecord er;
        er.level = r.level;
        er.h = r.h;
        er.ndof = r.ndof;
        er.dg_err = r.dg_err;
        er.h1_rel_err = r.h1_rel_err;
        er.l2_err = r.l2_err;
        series[key].records.push_back(er);
      }
    }
    for (const auto& [name, report] : series) {
      write_file_atomic(dir / "beam_convergence" / name, report.to_csv());
    }
    json manifest = manifest_base(config, "sweep");
    manifest["rows"] = result.records.size();
    manifest["skipped"] = result.skipped;
    manifest["failures"] = failures;
    manifest["seconds"] = result.seconds;
    manifest["timings"] = timings;
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    out << json{{"csv", (dir / (config.benchmark + ".csv")).string()},
                {"rows", result.records.size()},
                {"skipped", result.skipped.size()},
                {"failures", failures.size()}}
               .dump()
        << "\n";
    for (const auto& f : failures) err << f.dump() << "\n";
    return failures.empty() ? 0 : 1;
  } catch (const Error& e) {
    err << error_json(e.code(), e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double max_rel_diff(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const double scale = std::max(A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff());
  return (A - B).cwiseAbs().maxCoeff() / scale;
}

Mesh left_clamped_square(int n) {
  return classify_edges(
      rect_mesh(1.0, 1.0, n, n), [](const Edge& e, const Mesh&) { return std::abs(e.midpoint.x()) < 1e-12; },
      [](const Edge&, const Mesh&) { return true; });
}

VerifyResult check_patch() {
  auto mesh = std::make_shared<const Mesh>(
      classify_edges(rect_mesh(2.0, 1.0, 4, 3), [](const Edge&, const Mesh&) { return true; }, nullptr));
  const MaterialParams m = derive_params(bench_constants(100.0, 50.0, 0.3));
  const FiberDirection fiber(0.7);
  Mat2 G;
  G << 0.1, -0.3, 0.25, 0.05;
  const ExactSolution exact = affine_solution(Vec2(0.2, -0.1), G);
  LoadSpec loads;
  loads.dirichlet = exact.value;
  double worst = 0.0;
  for (const MethodConfig& mc : all_method_variants()) {
    SpaceKind kind = SpaceKind::DG1;
    if (mc.method == Method::CG1) kind = SpaceKind::CG1;
    if (mc.method == Method::CG2) kind = SpaceKind::CG2;
    auto space = std::make_shared<const FunctionSpace>(mesh, kind);
    const SolveReport sol = solve(assemble(*space, m, fiber, mc, loads));
    worst = std::max(worst, broken_h1_error(DiscreteField(space, sol.solution), exact).absolute);
  }
  return {"patch test, 8 methods", worst <= 1e-9, "max broken H1 error " + sci(worst)};
}

VerifyResult check_isotropic() {
  const Mesh mesh = left_clamped_square(3);
  auto mp = std::make_shared<const Mesh>(mesh);
  const FunctionSpace space(mp, SpaceKind::DG1);
  const MaterialParams m = derive_params(bench_constants(10.0, 1.0, 0.3));
  const FiberDirection fiber(1.1);
  LoadSpec loads;
  loads.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  double worst = 0.0;
  for (Method method : {Method::NIPG, Method::SIPG, Method::IIPG}) {
    const MethodConfig mc{method, false, StabilizationParams{}};
    const Eigen::MatrixXd A = Eigen::MatrixXd(assemble(space, m, fiber, mc, loads).matrix);
    const Eigen::MatrixXd R =
        isotropic_ipdg_matrix(mesh, m.lambda, m.mu_t, mc.theta(), mc.stab.k_lambda, mc.stab.k_mu);
    worst = std::max(worst, max_rel_diff(A, R));
  }
  return {"isotropic equivalence, 3 methods", worst <= 1e-13, "max relative difference " + sci(worst)};
}

VerifyResult check_interpolant() {
  // u = (x^2 - 2xy + 0.5, 3y^2 + xy - x)
  ExactSolution u;
  u.value = [](const Vec2& x) {
    return Vec2(x.x() * x.x() - 2 * x.x() * x.y() + 0.5, 3 * x.y() * x.y() + x.x() * x.y() - x.x());
  };
  u.gradient = [](const Vec2& x) {
    Mat2 g;
    g << 2 * x.x() - 2 * x.y(), -2 * x.x(), x.y() - 1.0, 6 * x.y() + x.x();
    return g;
  };
  const InterpolantPropertiesReport r =
      interpolant_properties_check(u, rect_mesh(1.0, 1.0, 4, 4), FiberDirection(std::numbers::pi / 3.0));
  const double worst = std::max({r.edge_mean, r.edge_normal, r.divergence, r.fiber_strain});
  return {"midpoint interpolant identities", r.passed(), "max residual " + sci(worst)};
}

VerifyResult check_coercivity() {
  auto mesh = std::make_shared<const Mesh>(left_clamped_square(4));
  const FunctionSpace space(mesh, SpaceKind::DG1);
  double worst = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 1e4}) {
    const MaterialParams m = derive_params(bench_constants(250.0, p, 0.3));
    for (double a : {0.0, std::numbers::pi / 3.0}) {
      const FiberDirection fiber(a);
      worst = std::min(worst, estimate_coercivity(space, m, fiber, {Method::NIPG, false,
                                                                    StabilizationParams::uniform(10.0)}));
      for (Method method : {Method::SIPG, Method::IIPG}) {
        worst = std::min(worst, estimate_coercivity(space, m, fiber, {method, false, {}}));
      }
    }
  }
  return {"discrete coercivity K > 0", worst > 0.0, "smallest K " + sci(worst)};
}

VerifyResult check_beam_oracle() {
  double worst = 0.0;
  for (double p : {1.0001, 3.0, 1e4}) {
    const MaterialParams m = derive_params(bench_constants(1500.0, p, 0.49995));
    for (double a : {std::numbers::pi / 8.0, std::numbers::pi / 3.0, 5.0 * std::numbers::pi / 6.0}) {
      const BeamSelfCheck c = beam_exact_solution(m, FiberDirection(a), 3000.0, 10.0, 2.0).check;
      worst = std::max({worst, c.strain, c.boundary, c.traction});
    }
  }
  return {"beam exact solution self-checks", worst <= 1e-11, "max residual " + sci(worst)};
}

VerifyResult check_ui_beta_zero() {
  auto mesh = std::make_shared<const Mesh>(left_clamped_square(3));
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const MaterialParams m = derive_params(bench_constants(10.0, 1.0, 0.3));  // beta = 0
  const FiberDirection fiber(0.4);
  LoadSpec loads;
  loads.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  StabilizationParams doubled;
  doubled.k_mu *= 2.0;
  double worst = 0.0;
  for (Method method : {Method::NIPG, Method::SIPG, Method::IIPG}) {
    MethodConfig analysed{method, true, {}};
    analysed.ui_extra_mu_penalty = true;
    const Eigen::MatrixXd ui = Eigen::MatrixXd(assemble(space, m, fiber, analysed, loads).matrix);
    const Eigen::MatrixXd full = Eigen::MatrixXd(assemble(space, m, fiber, {method, false, doubled}, loads).matrix);
    worst = std::max(worst, max_rel_diff(ui, full));
  }
  return {"UI with beta = 0 equals full form plus k_mu term", worst <= 1e-13, "max relative difference " + sci(worst)};
}

VerifyResult check_invalid_stabilization() {
  StabilizationParams s;
  s.k_beta = -1.0;
  try {
    s.validate();
  } catch (const Error& e) {
    return {"negative k_beta rejected", e.code() == ErrorCode::InvalidStabilization, std::string(to_string(e.code()))};
  }
  return {"negative k_beta rejected", false, "no error raised"};
}

VerifyResult check_solver() {
  auto mesh = std::make_shared<const Mesh>(left_clamped_square(6));
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const MaterialParams m = derive_params(bench_constants(250.0, 3.0, 0.3));
  LoadSpec loads;
  loads.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  loads.body_force = [](const Vec2& x) { return Vec2(std::sin(x.y()), -1.0); };
  const LinearSystem sys = assemble(space, m, FiberDirection(0.3), {Method::SIPG, false, {}}, loads);
  const SolveReport r = solve(sys);
  const double res = relative_residual(sys.matrix, r.solution, sys.rhs);
  return {"SIPG solve, independent residual", res <= 1e-10, "relative residual " + sci(res)};
}

}  // namespace

std::vector<VerifyResult> run_verify_suite() {
  std::vector<VerifyResult> out;
  for (auto check : {check_patch, check_isotropic, check_interpolant, check_coercivity, check_beam_oracle,
                     check_ui_beta_zero, check_invalid_stabilization, check_solver}) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"(check raised)", false, e.what()});
    }
  }
  return out;
}

int cmd_verify(std::ostream& out) {
  const std::vector<VerifyResult> results = run_verify_suite();
  bool all = true;
  for (const VerifyResult& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s  %-50s %s", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    out << line << "\n";
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "some checks failed") << "\n";
  return all ? 0 : 1;
}

}  // namespace tidg::cli
