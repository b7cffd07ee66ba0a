#include "tidg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "tidg/errors.hpp"
#include "tidg/io.hpp"

namespace tidg {

ExactSolution affine_solution(const Vec2& c, const Mat2& G) {
  ExactSolution u;
  u.value = [c, G](const Vec2& x) -> Vec2 { return c + G * x; };
  u.gradient = [G](const Vec2&) -> Mat2 { return G; };
  u.hessian = [](const Vec2&) { return std::array<Mat2, 2>{Mat2::Zero(), Mat2::Zero()}; };
  return u;
}

DiscreteField::DiscreteField(std::shared_ptr<const FunctionSpace> space, Eigen::VectorXd coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->dof_count()) {
    throw Error(ErrorCode::InvalidDimensions, "coefficient vector length " + std::to_string(coeffs_.size()) +
                                                  " != dof count " + std::to_string(space_->dof_count()));
  }
}

Vec2 DiscreteField::value(int element, const Vec2& x) const {
  const ShapeValues sv = space_->basis_at(element, space_->geometry(element).barycentric(x));
  Vec2 u = Vec2::Zero();
  for (int a = 0; a < sv.count; ++a) {
    const int node = space_->node(element, a);
    u.x() += sv.value[a] * coeffs_(FunctionSpace::dof(node, 0));
    u.y() += sv.value[a] * coeffs_(FunctionSpace::dof(node, 1));
  }
  return u;
}

Mat2 DiscreteField::gradient(int element, const Vec2& x) const {
  const ShapeValues sv = space_->basis_at(element, space_->geometry(element).barycentric(x));
  Mat2 g = Mat2::Zero();
  for (int a = 0; a < sv.count; ++a) {
    const int node = space_->node(element, a);
    g.row(0) += coeffs_(FunctionSpace::dof(node, 0)) * sv.grad[a].transpose();
    g.row(1) += coeffs_(FunctionSpace::dof(node, 1)) * sv.grad[a].transpose();
  }
  return g;
}

DiscreteField nodal_interpolant(const std::function<Vec2(const Vec2&)>& u,
                                std::shared_ptr<const FunctionSpace> space) {
  Eigen::VectorXd c(space->dof_count());
  for (int node = 0; node < space->node_count(); ++node) {
    const Vec2 v = u(space->node_coordinate(node));
    c(FunctionSpace::dof(node, 0)) = v.x();
    c(FunctionSpace::dof(node, 1)) = v.y();
  }
  return DiscreteField(std::move(space), std::move(c));
}

namespace {

// Calls f(element, x, weight) over a degree-`degree` rule on every element.
template <class F>
void for_each_element_point(const FunctionSpace& space, int degree, F&& f) {
  const QuadratureRule rule = element_quadrature(degree);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const ElementGeometry& geo = space.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      f(t, geo.map(rule.points[q]), rule.weights[q] * 2.0 * geo.area);
    }
  }
}

double strain_energy_density(const Mat2& g) {
  const Mat2 e = 0.5 * (g + g.transpose());
  return e.squaredNorm();
}

double dg_norm_impl(const DiscreteField& field, const ExactSolution* exact, std::array<bool, 2> comps) {
  const FunctionSpace& space = field.space();
  const Mesh& mesh = space.mesh();
  double sum = 0.0;
  for_each_element_point(space, 5, [&](int t, const Vec2& x, double w) {
    Mat2 g = field.gradient(t, x);
    if (exact) g -= exact->gradient(x);
    sum += w * strain_energy_density(g);
  });
  const QuadratureRule rule = edge_quadrature(5);
  for (const Edge& e : mesh.edges()) {
    if (e.tag == EdgeTag::Neumann) continue;
    const Vec2 x0 = mesh.vertices()[e.vertices[0]];
    const Vec2 x1 = mesh.vertices()[e.vertices[1]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = x0 + rule.points[q].x() * (x1 - x0);
      Vec2 jump = field.value(e.owner, x);
      if (e.neighbor) {
        jump -= field.value(*e.neighbor, x);
      } else {
        if (exact) jump -= exact->value(x);
        if (!comps[0]) jump.x() = 0.0;
        if (!comps[1]) jump.y() = 0.0;
      }
      // (1/2)(1/h_E) * (weight * h_E)
      sum += 0.5 * rule.weights[q] * jump.squaredNorm();
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

}  // namespace

double dg_norm(const DiscreteField& field, std::array<bool, 2> dirichlet_components) {
  return dg_norm_impl(field, nullptr, dirichlet_components);
}

double dg_norm_error(const DiscreteField& field, const ExactSolution& exact,
                     std::array<bool, 2> dirichlet_components) {
  return dg_norm_impl(field, &exact, dirichlet_components);
}

H1Error broken_h1_error(const DiscreteField& field, const ExactSolution& exact) {
  double semi = 0.0, l2 = 0.0, ref = 0.0;
  for_each_element_point(field.space(), 5, [&](int t, const Vec2& x, double w) {
    const Vec2 u = exact.value(x);
    const Mat2 g = exact.gradient(x);
    semi += w * (field.gradient(t, x) - g).squaredNorm();
    l2 += w * (field.value(t, x) - u).squaredNorm();
    ref += w * (g.squaredNorm() + u.squaredNorm());
  });
  if (!(ref > 0.0)) throw Error(ErrorCode::ZeroReference, "exact solution has zero H1 norm");
  H1Error e;
  e.seminorm = std::sqrt(semi);
  e.l2 = std::sqrt(l2);
  e.absolute = std::sqrt(semi + l2);
  e.relative = e.absolute / std::sqrt(ref);
  return e;
}

namespace {

// Highest-order rules available; the interpolant and its checks are also used
// on non-polynomial fields, where quadrature error would otherwise dominate.
constexpr int kOracleEdgeDegree = 19;
constexpr int kOracleElementDegree = 10;

Vec2 edge_average(const std::function<Vec2(const Vec2&)>& u, const Vec2& x0, const Vec2& x1) {
  const QuadratureRule rule = edge_quadrature(kOracleEdgeDegree);
  Vec2 s = Vec2::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * u(x0 + rule.points[q].x() * (x1 - x0));
  return s;
}

}  // namespace

DiscreteField midpoint_interpolant(const std::function<Vec2(const Vec2&)>& u,
                                   std::shared_ptr<const FunctionSpace> dg1_space) {
  if (dg1_space->kind() != SpaceKind::DG1) {
    throw Error(ErrorCode::UnsupportedDegree, "midpoint interpolant lives in DG1");
  }
  const Mesh& mesh = dg1_space->mesh();
  Eigen::VectorXd c(dg1_space->dof_count());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    std::array<Vec2, 3> mid;
    for (int j = 0; j < 3; ++j) {
      mid[j] = edge_average(u, mesh.vertices()[tri[j]], mesh.vertices()[tri[(j + 1) % 3]]);
    }
    for (int j = 0; j < 3; ++j) {
      // vertex j = mid(edge j) + mid(edge j+2) - mid(edge j+1) for a linear field
      const Vec2 v = mid[j] + mid[(j + 2) % 3] - mid[(j + 1) % 3];
      const int node = dg1_space->node(t, j);
      c(FunctionSpace::dof(node, 0)) = v.x();
      c(FunctionSpace::dof(node, 1)) = v.y();
    }
  }
  return DiscreteField(std::move(dg1_space), std::move(c));
}

bool InterpolantPropertiesReport::passed() const {
  return edge_mean <= tolerance && edge_normal <= tolerance && divergence <= tolerance &&
         fiber_strain <= tolerance;
}

InterpolantPropertiesReport interpolant_properties_check(const ExactSolution& exact, const Mesh& mesh,
                                                         const FiberDirection& fiber) {
  auto mesh_ptr = std::make_shared<const Mesh>(mesh);
  auto space = std::make_shared<const FunctionSpace>(mesh_ptr, SpaceKind::DG1);
  const DiscreteField pi = midpoint_interpolant(exact.value, space);
  const Vec2& a = fiber.a();

  InterpolantPropertiesReport r;
  double umax = 0.0;
  for (const Vec2& v : mesh.vertices()) umax = std::max(umax, exact.value(v).norm());
  r.scale = std::max(umax, std::numeric_limits<double>::min()) * std::max(1.0, std::sqrt(mesh.total_area()));
  r.tolerance = 1e-10 * r.scale;

  const QuadratureRule erule = edge_quadrature(kOracleEdgeDegree);
  for (const Edge& e : mesh.edges()) {
    const Vec2 x0 = mesh.vertices()[e.vertices[0]];
    const Vec2 x1 = mesh.vertices()[e.vertices[1]];
    std::vector<int> sides{e.owner};
    if (e.neighbor) sides.push_back(*e.neighbor);
    for (int t : sides) {
      Vec2 s = Vec2::Zero();
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const Vec2 x = x0 + erule.points[q].x() * (x1 - x0);
        s += erule.weights[q] * e.length * (exact.value(x) - pi.value(t, x));
      }
      r.edge_mean = std::max(r.edge_mean, s.norm());
      r.edge_normal = std::max(r.edge_normal, std::abs(s.dot(e.normal)));
    }
  }
  std::vector<double> div(mesh.num_triangles(), 0.0), fib(mesh.num_triangles(), 0.0);
  for_each_element_point(*space, kOracleElementDegree, [&](int t, const Vec2& x, double w) {
    const Mat2 g = exact.gradient(x) - pi.gradient(t, x);
    div[t] += w * g.trace();
    fib[t] += w * a.dot(g * a);
  });
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    r.divergence = std::max(r.divergence, std::abs(div[t]));
    r.fiber_strain = std::max(r.fiber_strain, std::abs(fib[t]));
  }
  return r;
}

InterpolantPropertiesReport interpolant_properties_check(const ExactSolution& exact, const Mesh& mesh,
                                                         const std::function<double(const Vec2&)>& angle_field) {
  std::optional<FiberDirection> fiber;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto pts = mesh.triangle_points(t);
    const FiberDirection f(angle_field((pts[0] + pts[1] + pts[2]) / 3.0));
    if (!fiber) {
      fiber = f;
    } else if (f.angle() != fiber->angle()) {
      throw Error(ErrorCode::NonConstantFiber, "fibre direction varies over the mesh");
    }
  }
  if (!fiber) throw Error(ErrorCode::InvalidDimensions, "empty mesh");
  return interpolant_properties_check(exact, mesh, *fiber);
}

std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2) throw Error(ErrorCode::InvalidSequence, "need at least two levels");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i].second > 0.0) || !(errors[i].first > 0.0)) {
      throw Error(ErrorCode::InvalidSequence, "h and e must be positive");
    }
    if (i > 0 && !(errors[i].first < errors[i - 1].first)) {
      throw Error(ErrorCode::InvalidSequence, "h must be strictly decreasing");
    }
  }
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    rates.push_back(std::log(errors[i].second / errors[i + 1].second) /
                    std::log(errors[i].first / errors[i + 1].first));
  }
  return rates;
}

double tail_rate(const std::vector<std::pair<double, double>>& errors, int levels) {
  convergence_rates(errors);  // validation
  const std::size_t n = errors.size();
  const std::size_t first = n >= static_cast<std::size_t>(levels) ? n - levels : 0;
  return std::log(errors[first].second / errors[n - 1].second) /
         std::log(errors[first].first / errors[n - 1].first);
}

bool InterpolationEstimateReport::passed() const {
  return l2_rate >= 1.9 && h1_rate >= 0.9 && divergence_rate >= 0.9 && fiber_rate >= 0.9 &&
         max_equality_defect <= 1e-12;
}

InterpolationEstimateReport interpolation_estimate_check(const ExactSolution& exact,
                                                         const std::vector<Mesh>& meshes,
                                                         const FiberDirection& fiber) {
  if (!exact.hessian) throw Error(ErrorCode::InvalidDimensions, "interpolation check needs the hessian");
  if (meshes.size() < 3) throw Error(ErrorCode::InvalidSequence, "need at least three meshes");
  const Vec2& a = fiber.a();
  InterpolationEstimateReport report;
  for (const Mesh& mesh : meshes) {
    auto space = std::make_shared<const FunctionSpace>(std::make_shared<const Mesh>(mesh), SpaceKind::DG1);
    const DiscreteField pi = midpoint_interpolant(exact.value, space);
    // Second derivatives of Pi u by central differences of its gradient at
    // each centroid; they vanish because Pi u is linear on every element.
    std::vector<std::array<Mat2, 2>> pi_hess(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto pts = mesh.triangle_points(t);
      const Vec2 c = (pts[0] + pts[1] + pts[2]) / 3.0;
      const double d = 1e-3 * mesh.element_diameters()[t];
      for (int k = 0; k < 2; ++k) {
        const Vec2 step = d * Vec2::Unit(k);
        const Mat2 dg = (pi.gradient(t, c + step) - pi.gradient(t, c - step)) / (2.0 * d);
        for (int i = 0; i < 2; ++i) pi_hess[t][i].col(k) = dg.row(i).transpose();
      }
    }
    InterpolationLevel lv;
    lv.h = mesh.h();
    for_each_element_point(*space, 5, [&](int t, const Vec2& x, double w) {
      const Mat2 g = exact.gradient(x) - pi.gradient(t, x);
      lv.l2 += w * (exact.value(x) - pi.value(t, x)).squaredNorm();
      lv.h1 += w * g.squaredNorm();
      lv.divergence += w * g.trace() * g.trace();
      const double f = a.dot(g * a);
      lv.fiber_strain += w * f * f;

      const std::array<Mat2, 2> H = exact.hessian(x);
      const std::array<Mat2, 2> He{H[0] - pi_hess[t][0], H[1] - pi_hess[t][1]};
      auto grad_div = [](const std::array<Mat2, 2>& h) -> Vec2 {
        return {h[0](0, 0) + h[1](1, 0), h[0](0, 1) + h[1](1, 1)};
      };
      auto grad_fiber = [&a](const std::array<Mat2, 2>& h) -> Vec2 {
        Vec2 r = Vec2::Zero();
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) r += a(i) * a(j) * h[i].row(j).transpose();
        }
        return r;
      };
      lv.h2_error += w * (He[0].squaredNorm() + He[1].squaredNorm());
      lv.h2_exact += w * (H[0].squaredNorm() + H[1].squaredNorm());
      lv.div_h1_error += w * grad_div(He).squaredNorm();
      lv.div_h1_exact += w * grad_div(H).squaredNorm();
      lv.fiber_h1_error += w * grad_fiber(He).squaredNorm();
      lv.fiber_h1_exact += w * grad_fiber(H).squaredNorm();
    });
    for (double* v : {&lv.l2, &lv.h1, &lv.divergence, &lv.fiber_strain, &lv.h2_error, &lv.h2_exact,
                      &lv.div_h1_error, &lv.div_h1_exact, &lv.fiber_h1_error, &lv.fiber_h1_exact}) {
      *v = std::sqrt(*v);
    }
    auto defect = [](double lhs, double rhs) {
      return std::abs(lhs - rhs) / std::max(rhs, std::numeric_limits<double>::min());
    };
    report.max_equality_defect =
        std::max({report.max_equality_defect, lv.h2_exact > 0 ? defect(lv.h2_error, lv.h2_exact) : lv.h2_error,
                  lv.div_h1_exact > 0 ? defect(lv.div_h1_error, lv.div_h1_exact) : lv.div_h1_error,
                  lv.fiber_h1_exact > 0 ? defect(lv.fiber_h1_error, lv.fiber_h1_exact) : lv.fiber_h1_error});
    report.levels.push_back(lv);
  }
  auto rate_of = [&](double InterpolationLevel::*member) {
    std::vector<std::pair<double, double>> seq;
    for (const auto& lv : report.levels) seq.emplace_back(lv.h, lv.*member);
    return tail_rate(seq, 3);
  };
  report.l2_rate = rate_of(&InterpolationLevel::l2);
  report.h1_rate = rate_of(&InterpolationLevel::h1);
  report.divergence_rate = rate_of(&InterpolationLevel::divergence);
  report.fiber_rate = rate_of(&InterpolationLevel::fiber_strain);
  return report;
}

std::vector<double> ErrorReport::h1_rates() const {
  std::vector<double> rates(records.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (a.h1_rel_err > 0 && b.h1_rel_err > 0 && b.h < a.h) {
      rates[i] = std::log(a.h1_rel_err / b.h1_rel_err) / std::log(a.h / b.h);
    }
  }
  return rates;
}

std::string ErrorReport::to_csv() const {
  std::ostringstream os;
  os << "level,h,ndof,dg_err,h1_rel_err,l2_err,rate_h1\n";
  const std::vector<double> rates = h1_rates();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ErrorRecord& r = records[i];
    os << r.level << ',' << format_double(r.h) << ',' << r.ndof << ',' << format_double(r.dg_err) << ','
       << format_double(r.h1_rel_err) << ',' << format_double(r.l2_err) << ','
       << (std::isnan(rates[i]) ? std::string() : format_double(rates[i])) << '\n';
  }
  return os.str();
}

}  // namespace tidg
