#include "tidg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "tidg/errors.hpp"

namespace tidg {

std::string to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::Interior: return "interior";
    case EdgeTag::Dirichlet: return "dirichlet";
    case EdgeTag::Neumann: return "neumann";
  }
  return "unknown";
}

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y());
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nt = num_triangles();
  element_edges_.resize(nt);
  diameters_.resize(nt);
  areas_.resize(nt);

  std::map<std::pair<int, int>, int> lookup;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= num_vertices()) {
        throw Error(ErrorCode::InvalidDimensions, "triangle references a missing vertex");
      }
    }
    const double area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(area > 0.0)) {
      throw Error(ErrorCode::InvalidDimensions, "triangle " + std::to_string(t) + " is not counter-clockwise");
    }
    areas_[t] = area;
    double diameter = 0.0;
    for (int j = 0; j < 3; ++j) {
      const int a = tri[j];
      const int b = tri[(j + 1) % 3];
      diameter = std::max(diameter, (vertices_[a] - vertices_[b]).norm());
      const auto key = std::minmax(a, b);
      auto it = lookup.find({key.first, key.second});
      if (it == lookup.end()) {
        Edge e;
        e.vertices = {a, b};
        e.owner = t;
        e.owner_local = j;
        const Vec2 d = vertices_[b] - vertices_[a];
        e.length = d.norm();
        e.normal = Vec2(d.y(), -d.x()) / e.length;  // CCW owner: right-hand normal points out
        e.midpoint = 0.5 * (vertices_[a] + vertices_[b]);
        e.tag = EdgeTag::Neumann;
        lookup.emplace(std::make_pair(key.first, key.second), num_edges());
        element_edges_[t][j] = num_edges();
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.neighbor) {
          throw Error(ErrorCode::InvalidDimensions, "edge shared by more than two triangles");
        }
        e.neighbor = t;
        e.neighbor_local = j;
        e.tag = EdgeTag::Interior;
        element_edges_[t][j] = it->second;
      }
    }
    diameters_[t] = diameter;
  }
}

double Mesh::h() const {
  return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

std::array<Vec2, 3> Mesh::triangle_points(int t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

namespace {

template <typename Pred>
std::vector<int> select_edges(const std::vector<Edge>& edges, Pred pred) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (pred(edges[i])) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<int> Mesh::interior_edges() const {
  return select_edges(edges_, [](const Edge& e) { return e.tag == EdgeTag::Interior; });
}

std::vector<int> Mesh::dirichlet_edges() const {
  return select_edges(edges_, [](const Edge& e) { return e.tag == EdgeTag::Dirichlet; });
}

std::vector<int> Mesh::neumann_edges() const {
  return select_edges(edges_, [](const Edge& e) { return e.tag == EdgeTag::Neumann; });
}

std::vector<int> Mesh::interior_or_dirichlet_edges() const {
  return select_edges(edges_, [](const Edge& e) { return e.tag != EdgeTag::Neumann; });
}

std::optional<int> Mesh::find_vertex(const Vec2& p, double tol) const {
  for (int i = 0; i < num_vertices(); ++i) {
    if ((vertices_[i] - p).norm() <= tol) return i;
  }
  return std::nullopt;
}

void Mesh::set_boundary_tag(int edge, EdgeTag tag) {
  Edge& e = edges_.at(edge);
  if (!e.on_boundary() || tag == EdgeTag::Interior) {
    throw Error(ErrorCode::InvalidDimensions, "only boundary edges take Dirichlet/Neumann tags");
  }
  e.tag = tag;
}

Mesh rect_mesh(double length, double height, int nx, int ny, double origin_y) {
  if (!(length > 0.0) || !(height > 0.0) || nx < 1 || ny < 1) {
    throw Error(ErrorCode::InvalidDimensions, "rectangle needs positive sizes and nx, ny >= 1");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.emplace_back(length * i / nx, origin_y + height * j / ny);
    }
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = j * (nx + 1) + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + nx + 1;
      const int v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh cook_mesh(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidDimensions, "cook_mesh needs n >= 1");
  const Vec2 P0(0.0, 0.0), P1(48.0, 44.0), P2(48.0, 60.0), P3(0.0, 44.0);
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    const double eta = static_cast<double>(j) / n;
    for (int i = 0; i <= n; ++i) {
      const double xi = static_cast<double>(i) / n;
      vertices.push_back((1 - xi) * (1 - eta) * P0 + xi * (1 - eta) * P1 + xi * eta * P2 +
                         (1 - xi) * eta * P3);
    }
  }
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * (n + 1) + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + n + 1;
      const int v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  Mesh mesh(std::move(vertices), std::move(triangles));
  return classify_edges(
      std::move(mesh), [](const Edge& e, const Mesh&) { return std::abs(e.midpoint.x()) < 1e-9; },
      [](const Edge&, const Mesh&) { return true; });
}

Mesh classify_edges(Mesh mesh, const EdgePredicate& dirichlet, const EdgePredicate& neumann) {
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    if (!e.on_boundary()) continue;
    if (dirichlet && dirichlet(e, mesh)) {
      mesh.set_boundary_tag(i, EdgeTag::Dirichlet);
    } else if (neumann && neumann(e, mesh)) {
      mesh.set_boundary_tag(i, EdgeTag::Neumann);
    } else {
      throw Error(ErrorCode::UncoveredBoundaryEdge,
                  "boundary edge " + std::to_string(i) + " at (" + std::to_string(e.midpoint.x()) + ", " +
                      std::to_string(e.midpoint.y()) + ") matches no predicate");
    }
  }
  return mesh;
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices()) verts.push_back({v.x(), v.y()});
  auto& tris = j["triangles"] = nlohmann::json::array();
  for (const auto& t : mesh.triangles()) tris.push_back({t[0], t[1], t[2]});
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : mesh.edges()) {
    nlohmann::json rec;
    rec["vertices"] = {e.vertices[0], e.vertices[1]};
    rec["owner"] = e.owner;
    rec["neighbor"] = e.neighbor ? nlohmann::json(*e.neighbor) : nlohmann::json(nullptr);
    rec["normal"] = {e.normal.x(), e.normal.y()};
    rec["length"] = e.length;
    rec["tag"] = to_string(e.tag);
    edges.push_back(std::move(rec));
  }
  return j.dump();
}

}  // namespace tidg
