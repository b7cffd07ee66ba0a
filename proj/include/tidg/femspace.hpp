#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tidg/mesh.hpp"

namespace tidg {

enum class SpaceKind { CG1, CG2, DG1 };

std::string to_string(SpaceKind kind);

/// Points on the reference triangle (0,0), (1,0), (0,1) or on [0,1]; weights
/// sum to the reference measure (1/2 or 1).
struct QuadratureRule {
  std::vector<Vec2> points;   // edge rules use x() only
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Exact up to `degree` (1..10) on the reference triangle.
QuadratureRule element_quadrature(int degree);

/// Gauss-Legendre on [0,1] exact up to `degree` (1..19); degree 1 is the
/// midpoint rule.
QuadratureRule edge_quadrature(int degree);

/// Up to six Lagrange basis values with physical gradients.
struct ShapeValues {
  int count = 0;
  std::array<double, 6> value{};
  std::array<Vec2, 6> grad{};
};

/// Affine data of one triangle.
struct ElementGeometry {
  std::array<Vec2, 3> points;
  double area = 0.0;
  std::array<Vec2, 3> grad_lambda;  // gradients of the barycentric coordinates

  explicit ElementGeometry(const std::array<Vec2, 3>& pts);

  Vec2 map(const Vec2& ref) const;
  std::array<double, 3> barycentric(const Vec2& x) const;
};

/// P1 (order 1) or P2 (order 2) basis at barycentric coordinates.
ShapeValues lagrange_basis(int order, const std::array<double, 3>& lambda, const ElementGeometry& geo);

/// Vector-valued CG1, CG2 or DG1 space. Scalar node k carries dofs 2k (x) and
/// 2k+1 (y). Local node order: three vertices, then (P2) the midpoints of
/// local edges 0-1, 1-2, 2-0.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

  SpaceKind kind() const { return kind_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ElementGeometry& geometry(int element) const { return geometry_[element]; }

  int order() const { return kind_ == SpaceKind::CG2 ? 2 : 1; }
  int nodes_per_element() const { return kind_ == SpaceKind::CG2 ? 6 : 3; }
  int dofs_per_element() const { return 2 * nodes_per_element(); }
  int node_count() const { return static_cast<int>(node_coords_.size()); }
  int dof_count() const { return 2 * node_count(); }
  bool discontinuous() const { return kind_ == SpaceKind::DG1; }

  /// Global node of local node `local` in `element`.
  int node(int element, int local) const { return element_nodes_[element * nodes_per_element() + local]; }
  static int dof(int node, int component) { return 2 * node + component; }
  /// Global dofs of an element in local order (x, y interleaved).
  std::vector<int> element_dofs(int element) const;
  const Vec2& node_coordinate(int node) const { return node_coords_[node]; }

  ShapeValues basis_at(int element, const std::array<double, 3>& lambda) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_;
  std::vector<int> element_nodes_;
  std::vector<Vec2> node_coords_;
  std::vector<ElementGeometry> geometry_;
};

/// Basis values and gradients at a physical point. Throws
/// Error(PointOutsideElement) if the point is not in the closed triangle.
ShapeValues shape_eval(const FunctionSpace& space, int element, const Vec2& point);

/// Edge average (1/h_E) int_E v ds of a trace given on the unit parameter
/// interval, using a rule of the given degree.
double pi0_edge(const std::function<double(double)>& trace, int degree = 5);

/// Edge average from trace samples at the points of `rule`.
double pi0_edge(std::span<const double> values, const QuadratureRule& rule);

}  // namespace tidg
