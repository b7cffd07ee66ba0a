#include "tidg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "tidg/errors.hpp"
#include "tidg/io.hpp"
#include "tidg/solver.hpp"

namespace tidg {

std::vector<MethodConfig> all_method_variants(const StabilizationParams& stab) {
  std::vector<MethodConfig> out;
  out.push_back({Method::CG1, false, stab});
  out.push_back({Method::CG2, false, stab});
  for (bool ui : {false, true}) {
    for (Method m : {Method::NIPG, Method::SIPG, Method::IIPG}) out.push_back({m, ui, stab});
  }
  return out;
}

MethodConfig parse_method(const std::string& name, const StabilizationParams& stab) {
  std::string key;
  for (char c : name) key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (key.rfind("P1_", 0) == 0 && key != "P1_CG") key = key.substr(3);
  static const std::map<std::string, MethodConfig> table = [] {
    std::map<std::string, MethodConfig> t;
    t["P1_CG"] = t["CG1"] = {Method::CG1, false, {}};
    t["P2_CG"] = t["CG2"] = {Method::CG2, false, {}};
    t["NIPG"] = {Method::NIPG, false, {}};
    t["SIPG"] = {Method::SIPG, false, {}};
    t["IIPG"] = {Method::IIPG, false, {}};
    t["NIPG_UI"] = {Method::NIPG, true, {}};
    t["SIPG_UI"] = {Method::SIPG, true, {}};
    t["IIPG_UI"] = {Method::IIPG, true, {}};
    return t;
  }();
  const auto it = table.find(key);
  if (it == table.end()) throw Error(ErrorCode::ConfigError, "unknown method '" + name + "'");
  MethodConfig c = it->second;
  c.stab = stab;
  return c;
}

EngineeringConstants bench_constants(double E_t, double p, double nu, double q) {
  EngineeringConstants ec;
  ec.E_t = E_t;
  ec.p = p;
  ec.q = q;
  ec.nu_t = nu;
  ec.nu_l = nu;
  return ec;
}

double BeamSolution::g(double y) const { return -(t / H) * compliance(2, 0) * (y * y - H * H / 4.0); }

BeamSolution beam_exact_solution(const MaterialParams& material, const FiberDirection& fiber, double t, double L,
                                 double H) {
  BeamSolution b;
  b.compliance = compliance_matrix(material, fiber);
  b.t = t;
  b.L = L;
  b.H = H;
  b.slope = -2.0 * t / H;
  const double s = b.slope;
  const double S11 = b.compliance(0, 0);
  const double S21 = b.compliance(1, 0);
  const double S31 = b.compliance(2, 0);
  // u_x = S11 s x y + S31 s y^2/2 + f0,  u_y = S21 s y^2/2 - S11 s x^2/2 + h0
  const double f0 = (t / H) * S31 * H * H / 4.0;
  const double h0 = -S21 * s * H * H / 8.0;
  b.field.value = [=](const Vec2& x) -> Vec2 {
    const double X = x.x(), Y = x.y();
    return {S11 * s * X * Y + 0.5 * S31 * s * Y * Y + f0, 0.5 * S21 * s * Y * Y - 0.5 * S11 * s * X * X + h0};
  };
  b.field.gradient = [=](const Vec2& x) -> Mat2 {
    const double X = x.x(), Y = x.y();
    Mat2 g;
    g << S11 * s * Y, S11 * s * X + S31 * s * Y, -S11 * s * X, S21 * s * Y;
    return g;
  };
  b.field.hessian = [=](const Vec2&) {
    Mat2 hx, hy;
    hx << 0.0, S11 * s, S11 * s, S31 * s;
    hy << -S11 * s, 0.0, 0.0, S21 * s;
    return std::array<Mat2, 2>{hx, hy};
  };

  // Runtime residual checks of the closed form.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ux(0.0, L), uy(-H / 2.0, H / 2.0);
  double strain_err = 0.0, strain_scale = 0.0, disp_scale = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(ux(rng), uy(rng));
    const Eigen::Vector3d sigma(s * x.y(), 0.0, 0.0);
    const Eigen::Vector3d expected = b.compliance * sigma;
    const Mat2 G = b.field.gradient(x);
    const Eigen::Vector3d eps = strain_to_voigt(0.5 * (G + G.transpose()));
    strain_err = std::max(strain_err, (eps - expected).cwiseAbs().maxCoeff());
    strain_scale = std::max(strain_scale, expected.cwiseAbs().maxCoeff());
    disp_scale = std::max(disp_scale, b.field.value(x).norm());
  }
  for (const Vec2& corner : {Vec2(0, -H / 2), Vec2(0, H / 2), Vec2(L, -H / 2), Vec2(L, H / 2)}) {
    disp_scale = std::max(disp_scale, b.field.value(corner).norm());
  }
  b.check.strain = strain_scale > 0.0 ? strain_err / strain_scale : strain_err;

  const Mat3 C = voigt_matrix(material, fiber).entries;
  double bnd = 0.0, trac = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double y = -H / 2.0 + H * i / 20.0;
    bnd = std::max(bnd, std::abs(b.field.value({0.0, y}).x() - b.g(y)));
    const Mat2 G = b.field.gradient({L, y});
    const Eigen::Vector3d sig = C * strain_to_voigt(0.5 * (G + G.transpose()));
    const Vec2 tn(sig(0), sig(2));  // sigma n with n = (1, 0)
    trac = std::max(trac, (tn - b.end_load(y)).cwiseAbs().maxCoeff());
  }
  b.check.boundary = disp_scale > 0.0 ? bnd / disp_scale : bnd;
  b.check.traction = trac / std::abs(t);
  return b;
}

Problem cook_problem(int n, const MaterialParams& material, const FiberDirection& fiber, double t) {
  Problem pr;
  pr.benchmark = "cook";
  pr.mesh = std::make_shared<const Mesh>(cook_mesh(n));
  pr.material = material;
  pr.fiber = fiber;
  pr.loads.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  pr.loads.traction = [t](const Vec2& x) -> Vec2 {
    return std::abs(x.x() - 48.0) < 1e-9 ? Vec2(0.0, t) : Vec2::Zero();
  };
  pr.tip = Vec2(48.0, 60.0);
  return pr;
}

Problem beam_problem(int level, const MaterialParams& material, const FiberDirection& fiber, double t, double L,
                     double H) {
  if (level < 0) throw Error(ErrorCode::InvalidDimensions, "negative refinement level");
  const int factor = 1 << level;
  Mesh mesh = rect_mesh(L, H, 10 * factor, 2 * factor, -H / 2.0);
  mesh = classify_edges(
      std::move(mesh), [](const Edge& e, const Mesh&) { return std::abs(e.midpoint.x()) < 1e-9; },
      [](const Edge&, const Mesh&) { return true; });

  Problem pr;
  pr.benchmark = "beam";
  pr.mesh = std::make_shared<const Mesh>(std::move(mesh));
  pr.material = material;
  pr.fiber = fiber;
  pr.exact = beam_exact_solution(material, fiber, t, L, H);
  const BeamSolution exact = *pr.exact;
  pr.loads.dirichlet = [exact](const Vec2& x) { return Vec2(exact.g(x.y()), 0.0); };
  pr.loads.dirichlet_components = {true, false};
  pr.loads.traction = [exact](const Vec2& x) -> Vec2 {
    return std::abs(x.x() - exact.L) < 1e-9 ? exact.end_load(x.y()) : Vec2::Zero();
  };
  pr.loads.point_constraints.push_back({Vec2(0.0, -H / 2.0), 1, 0.0});
  pr.tip = Vec2(L, H / 2.0);
  return pr;
}

double vertex_uy(const DiscreteField& field, const Vec2& point) {
  const FunctionSpace& space = field.space();
  const Mesh& mesh = space.mesh();
  const auto vertex = mesh.find_vertex(point);
  if (!vertex) throw Error(ErrorCode::PointOutsideElement, "tip point is not a mesh vertex");
  if (!space.discontinuous()) return field.coefficients()(FunctionSpace::dof(*vertex, 1));
  double sum = 0.0;
  int count = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int j = 0; j < 3; ++j) {
      if (mesh.triangles()[t][j] == *vertex) {
        sum += field.coefficients()(FunctionSpace::dof(space.node(t, j), 1));
        ++count;
      }
    }
  }
  return sum / count;
}

RunRecord run_problem(const Problem& problem, const MethodConfig& config, double tol,
                      std::shared_ptr<const DiscreteField>* solution) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.benchmark = problem.benchmark;
  rec.method = config.name();
  rec.angle = problem.fiber.angle();
  rec.h = problem.mesh->h();

  SpaceKind kind = SpaceKind::DG1;
  if (config.method == Method::CG1) kind = SpaceKind::CG1;
  if (config.method == Method::CG2) kind = SpaceKind::CG2;
  auto space = std::make_shared<const FunctionSpace>(problem.mesh, kind);
  rec.ndof = space->dof_count();

  const LinearSystem sys = assemble(*space, problem.material, problem.fiber, config, problem.loads);
  const SolveReport sol = solve(sys, tol);
  rec.residual = sol.relative_residual;
  auto field = std::make_shared<const DiscreteField>(space, sol.solution);
  rec.tip_uy = vertex_uy(*field, problem.tip);
  if (problem.exact) {
    rec.dg_err = dg_norm_error(*field, problem.exact->field, problem.loads.dirichlet_components);
    const H1Error h1 = broken_h1_error(*field, problem.exact->field);
    rec.h1_rel_err = h1.relative;
    rec.l2_err = h1.l2;
  }
  if (solution) *solution = field;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void parallel_for(int n, bool serial, const std::function<void(int)>& fn) {
  const int workers = serial ? 1 : std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<double> cook_p_grid() {
  std::vector<double> p{1.0, 2.0, 3.0, 4.0, 5.0};
  for (int k = 0; k <= 48; ++k) p.push_back(std::pow(10.0, 1.0 + k / 12.0));
  return p;
}

struct Cell {
  int method;
  double p;
  double angle;
  int level;
};

void check_config(const SweepConfig& c) {
  if (c.methods.empty() || c.p.empty() || c.angles.empty() || c.levels.empty()) {
    throw Error(ErrorCode::ConfigError, "sweep grid is empty");
  }
}

// Runs the Cartesian product, skipping unstable materials.
SweepResult run_sweep(const SweepConfig& config, double E_t,
                      const std::function<Problem(int, const MaterialParams&, const FiberDirection&)>& make) {
  check_config(config);
  const auto start = std::chrono::steady_clock::now();
  SweepResult result;
  std::vector<Cell> cells;
  std::map<double, MaterialParams> materials;
  for (double p : config.p) {
    const EngineeringConstants ec = bench_constants(E_t, p, config.nu, config.q);
    const StabilityReport st = stability_check(ec);
    if (!st.passed()) {
      result.skipped.push_back("StabilityViolation: p=" + format_double(p) + " nu=" + format_double(config.nu) +
                               " q=" + format_double(config.q));
      continue;
    }
    materials[p] = derive_params(ec);
  }
  for (int m = 0; m < static_cast<int>(config.methods.size()); ++m) {
    for (double p : config.p) {
      if (!materials.count(p)) continue;
      for (double a : config.angles) {
        for (int level : config.levels) cells.push_back({m, p, a, level});
      }
    }
  }
  result.records.resize(cells.size());
  parallel_for(static_cast<int>(cells.size()), config.serial, [&](int i) {
    const Cell& c = cells[i];
    const FiberDirection fiber(c.angle);
    RunRecord rec;
    try {
      const Problem pr = make(c.level, materials.at(c.p), fiber);
      rec = run_problem(pr, config.methods[c.method], config.tol);
    } catch (const std::exception& e) {
      rec.method = config.methods[c.method].name();
      rec.ok = false;
      rec.error = e.what();
      rec.angle = fiber.angle();
      rec.tip_uy = std::numeric_limits<double>::quiet_NaN();
    }
    rec.p = c.p;
    rec.nu = config.nu;
    rec.level = c.level;
    result.records[i] = std::move(rec);
  });
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

SweepConfig cook_defaults() {
  SweepConfig c;
  c.methods = all_method_variants();
  c.p = cook_p_grid();
  c.angles = {std::numbers::pi / 3.0, 3.0 * std::numbers::pi / 4.0};
  c.levels = {32};
  return c;
}

SweepConfig cook_orientation_defaults() {
  SweepConfig c = cook_defaults();
  c.p = {1e5};
  c.angles.clear();
  for (int k = 0; k <= 24; ++k) c.angles.push_back(k * std::numbers::pi / 24.0);
  return c;
}

SweepConfig beam_defaults() {
  SweepConfig c;
  c.methods = all_method_variants();
  c.p = {1.0001, 3.0, 1e4};
  c.angles = {std::numbers::pi / 8.0, std::numbers::pi / 3.0, 5.0 * std::numbers::pi / 6.0};
  c.levels = {0, 1, 2, 3, 4};
  return c;
}

SweepResult run_cook(const SweepConfig& config) {
  const double E_t = config.E_t > 0.0 ? config.E_t : 250.0;
  const double t = config.t != 0.0 ? config.t : 100.0;
  SweepResult r = run_sweep(config, E_t, [t](int n, const MaterialParams& m, const FiberDirection& f) {
    return cook_problem(n, m, f, t);
  });
  for (auto& rec : r.records) rec.benchmark = "cook";
  return r;
}

SweepResult run_beam(const SweepConfig& config) {
  const double E_t = config.E_t > 0.0 ? config.E_t : 1500.0;
  const double t = config.t != 0.0 ? config.t : 3000.0;
  SweepResult r = run_sweep(config, E_t, [t](int level, const MaterialParams& m, const FiberDirection& f) {
    return beam_problem(level, m, f, t);
  });
  for (auto& rec : r.records) rec.benchmark = "beam";

  // Rates between consecutive levels of the same (method, p, angle) series.
  std::vector<int> levels = config.levels;
  std::sort(levels.begin(), levels.end());
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    RunRecord& cur = r.records[i];
    const RunRecord& prev = r.records[i - 1];
    if (cur.method == prev.method && cur.p == prev.p && cur.angle == prev.angle && cur.level > prev.level &&
        cur.ok && prev.ok && cur.h1_rel_err > 0.0 && prev.h1_rel_err > 0.0) {
      cur.rate = std::log(prev.h1_rel_err / cur.h1_rel_err) / std::log(prev.h / cur.h);
    }
  }

  // Exact tip deflection for each (p, angle, level).
  std::map<double, bool> stable;
  for (const auto& rec : r.records) stable[rec.p] = true;
  for (double p : config.p) {
    if (!stable.count(p)) continue;
    const MaterialParams m = derive_params(bench_constants(E_t, p, config.nu, config.q));
    for (double a : config.angles) {
      const FiberDirection fiber(a);
      const BeamSolution exact = beam_exact_solution(m, fiber, t, 10.0, 2.0);
      for (int level : config.levels) {
        RunRecord rec;
        rec.benchmark = "beam";
        rec.method = "Exact";
        rec.p = p;
        rec.angle = fiber.angle();
        rec.nu = config.nu;
        rec.level = level;
        const int factor = 1 << level;
        rec.h = rect_mesh(10.0, 2.0, 10 * factor, 2 * factor, -1.0).h();
        rec.ndof = 0;
        rec.tip_uy = exact.field.value({10.0, 1.0}).y();
        r.records.push_back(rec);
      }
    }
  }
  return r;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "benchmark,method,p,angle,nu,level,h,ndof,tip_uy,dg_err,h1_rel_err,rate\n";
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const RunRecord& r : records) {
    if (!r.ok) continue;
    os << r.benchmark << ',' << r.method << ',' << format_double(r.p) << ',' << format_double(r.angle) << ','
       << format_double(r.nu) << ',' << r.level << ',' << format_double(r.h) << ',' << r.ndof << ','
       << format_double(r.tip_uy) << ',' << num(r.dg_err) << ',' << num(r.h1_rel_err) << ',' << num(r.rate)
       << '\n';
  }
  return os.str();
}

}  // namespace tidg
