#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tidg/material.hpp"

namespace tidg {

enum class EdgeTag { Interior, Dirichlet, Neumann };

std::string to_string(EdgeTag tag);

struct Edge {
  std::array<int, 2> vertices{};
  int owner = -1;                   // triangle with the smaller index
  std::optional<int> neighbor;      // absent on the boundary
  int owner_local = -1;             // local edge slot in the owner
  int neighbor_local = -1;
  Vec2 normal = Vec2::Zero();       // unit, outward from owner
  double length = 0.0;              // h_E
  Vec2 midpoint = Vec2::Zero();
  EdgeTag tag = EdgeTag::Interior;

  bool on_boundary() const { return !neighbor.has_value(); }
};

/// Conforming triangulation. Triangles are counter-clockwise; local edge j of
/// a triangle joins its vertices j and (j+1) mod 3.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::array<int, 3>& element_edges(int t) const { return element_edges_[t]; }
  const std::vector<double>& element_diameters() const { return diameters_; }
  const std::vector<double>& areas() const { return areas_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// h = max over elements of the element diameter.
  double h() const;
  double total_area() const;

  std::array<Vec2, 3> triangle_points(int t) const;

  // Edge subsets used by assembly: interior, Dirichlet, Neumann, and
  // interior-or-Dirichlet (where jumps are penalised).
  std::vector<int> interior_edges() const;
  std::vector<int> dirichlet_edges() const;
  std::vector<int> neumann_edges() const;
  std::vector<int> interior_or_dirichlet_edges() const;

  /// Index of the vertex at `p` (within tol), if any.
  std::optional<int> find_vertex(const Vec2& p, double tol = 1e-10) const;

  void set_boundary_tag(int edge, EdgeTag tag);

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> diameters_;
  std::vector<double> areas_;
};

using EdgePredicate = std::function<bool(const Edge&, const Mesh&)>;

/// length x height rectangle with lower-left corner (0, origin_y), nx*ny
/// cells each split along the lower-left to upper-right diagonal. Boundary
/// edges come back tagged Neumann.
Mesh rect_mesh(double length, double height, int nx, int ny, double origin_y = 0.0);

/// Cook's membrane, corners (0,0), (48,44), (48,60), (0,44), n x n cells
/// mapped bilinearly. Left edge Dirichlet, all other boundary edges Neumann.
Mesh cook_mesh(int n);

/// Tags boundary edges. Dirichlet wins when both predicates match; a
/// boundary edge matched by neither raises Error(UncoveredBoundaryEdge).
Mesh classify_edges(Mesh mesh, const EdgePredicate& dirichlet, const EdgePredicate& neumann);

/// Debug dump: {"vertices": [[x,y],...], "triangles": [[i,j,k],...], "edges": [...]}.
std::string mesh_to_json(const Mesh& mesh);

}  // namespace tidg
