#include "tidg/femspace.hpp"

#include <cmath>
#include <numbers>

#include "tidg/errors.hpp"

namespace tidg {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CG1: return "CG1";
    case SpaceKind::CG2: return "CG2";
    case SpaceKind::DG1: return "DG1";
  }
  return "unknown";
}

namespace {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

QuadratureRule collapsed_rule(int degree) {
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int j = 0; j < n; ++j) {
    const double v = 0.5 * (x[j] + 1.0);
    for (int i = 0; i < n; ++i) {
      const double u = 0.5 * (x[i] + 1.0);
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - v));
    }
  }
  return rule;
}

}  // namespace

QuadratureRule element_quadrature(int degree) {
  if (degree < 1 || degree > 10) {
    throw Error(ErrorCode::UnsupportedDegree, "triangle rules exist for degrees 1..10, got " + std::to_string(degree));
  }
  QuadratureRule rule;
  rule.degree = degree;
  if (degree == 1) {
    rule.points = {Vec2(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
  } else if (degree == 2) {
    rule.points = {Vec2(1.0 / 6.0, 1.0 / 6.0), Vec2(2.0 / 3.0, 1.0 / 6.0), Vec2(1.0 / 6.0, 2.0 / 3.0)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  } else if (degree <= 5) {
    // Seven-point degree-5 rule (Radon).
    const double r = std::sqrt(15.0);
    const double a1 = (6.0 - r) / 21.0, b1 = (9.0 + 2.0 * r) / 21.0;
    const double a2 = (6.0 + r) / 21.0, b2 = (9.0 - 2.0 * r) / 21.0;
    const double w1 = (155.0 - r) / 2400.0, w2 = (155.0 + r) / 2400.0;
    rule.points = {Vec2(1.0 / 3.0, 1.0 / 3.0), Vec2(a1, a1), Vec2(b1, a1), Vec2(a1, b1),
                   Vec2(a2, a2), Vec2(b2, a2), Vec2(a2, b2)};
    rule.weights = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
  } else {
    rule = collapsed_rule(degree);
  }
  return rule;
}

QuadratureRule edge_quadrature(int degree) {
  if (degree < 1 || degree > 19) {
    throw Error(ErrorCode::UnsupportedDegree, "edge rules exist for degrees 1..19, got " + std::to_string(degree));
  }
  const int n = (degree + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    rule.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

ElementGeometry::ElementGeometry(const std::array<Vec2, 3>& pts) : points(pts) {
  const Vec2 e1 = points[1] - points[0];
  const Vec2 e2 = points[2] - points[0];
  const double det = e1.x() * e2.y() - e2.x() * e1.y();
  area = 0.5 * det;
  // lambda_1 and lambda_2 are the reference coordinates; rows of J^{-1}.
  grad_lambda[1] = Vec2(e2.y(), -e2.x()) / det;
  grad_lambda[2] = Vec2(-e1.y(), e1.x()) / det;
  grad_lambda[0] = -grad_lambda[1] - grad_lambda[2];
}

Vec2 ElementGeometry::map(const Vec2& ref) const {
  return points[0] + ref.x() * (points[1] - points[0]) + ref.y() * (points[2] - points[0]);
}

std::array<double, 3> ElementGeometry::barycentric(const Vec2& x) const {
  const Vec2 d = x - points[0];
  const double l1 = grad_lambda[1].dot(d);
  const double l2 = grad_lambda[2].dot(d);
  return {1.0 - l1 - l2, l1, l2};
}

ShapeValues lagrange_basis(int order, const std::array<double, 3>& l, const ElementGeometry& geo) {
  ShapeValues s;
  const auto& g = geo.grad_lambda;
  if (order == 1) {
    s.count = 3;
    for (int i = 0; i < 3; ++i) {
      s.value[i] = l[i];
      s.grad[i] = g[i];
    }
    return s;
  }
  s.count = 6;
  for (int i = 0; i < 3; ++i) {
    s.value[i] = l[i] * (2.0 * l[i] - 1.0);
    s.grad[i] = (4.0 * l[i] - 1.0) * g[i];
  }
  for (int j = 0; j < 3; ++j) {
    const int k = (j + 1) % 3;
    s.value[3 + j] = 4.0 * l[j] * l[k];
    s.grad[3 + j] = 4.0 * (l[k] * g[j] + l[j] * g[k]);
  }
  return s;
}

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind)
    : mesh_(std::move(mesh)), kind_(kind) {
  const Mesh& m = *mesh_;
  const int nt = m.num_triangles();
  geometry_.reserve(nt);
  for (int t = 0; t < nt; ++t) geometry_.emplace_back(m.triangle_points(t));

  const int npe = nodes_per_element();
  element_nodes_.resize(static_cast<size_t>(nt) * npe);
  switch (kind_) {
    case SpaceKind::CG1:
      node_coords_ = m.vertices();
      for (int t = 0; t < nt; ++t) {
        for (int j = 0; j < 3; ++j) element_nodes_[t * 3 + j] = m.triangles()[t][j];
      }
      break;
    case SpaceKind::CG2:
      node_coords_ = m.vertices();
      for (const Edge& e : m.edges()) node_coords_.push_back(e.midpoint);
      for (int t = 0; t < nt; ++t) {
        for (int j = 0; j < 3; ++j) {
          element_nodes_[t * 6 + j] = m.triangles()[t][j];
          element_nodes_[t * 6 + 3 + j] = m.num_vertices() + m.element_edges(t)[j];
        }
      }
      break;
    case SpaceKind::DG1:
      node_coords_.reserve(static_cast<size_t>(nt) * 3);
      for (int t = 0; t < nt; ++t) {
        for (int j = 0; j < 3; ++j) {
          element_nodes_[t * 3 + j] = t * 3 + j;
          node_coords_.push_back(m.vertices()[m.triangles()[t][j]]);
        }
      }
      break;
  }
}

std::vector<int> FunctionSpace::element_dofs(int element) const {
  std::vector<int> dofs(dofs_per_element());
  for (int a = 0; a < nodes_per_element(); ++a) {
    const int n = node(element, a);
    dofs[2 * a] = dof(n, 0);
    dofs[2 * a + 1] = dof(n, 1);
  }
  return dofs;
}

ShapeValues FunctionSpace::basis_at(int element, const std::array<double, 3>& lambda) const {
  return lagrange_basis(order(), lambda, geometry_[element]);
}

ShapeValues shape_eval(const FunctionSpace& space, int element, const Vec2& point) {
  const auto lambda = space.geometry(element).barycentric(point);
  for (double l : lambda) {
    if (l < -1e-12 || l > 1.0 + 1e-12) {
      throw Error(ErrorCode::PointOutsideElement,
                  "point (" + std::to_string(point.x()) + ", " + std::to_string(point.y()) +
                      ") is outside element " + std::to_string(element));
    }
  }
  return space.basis_at(element, lambda);
}

double pi0_edge(const std::function<double(double)>& trace, int degree) {
  const QuadratureRule rule = edge_quadrature(degree);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * trace(rule.points[q].x());
  return s;
}

double pi0_edge(std::span<const double> values, const QuadratureRule& rule) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * values[q];
  return s;
}

}  // namespace tidg
