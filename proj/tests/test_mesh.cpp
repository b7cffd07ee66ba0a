#include <gtest/gtest.h>

#include <json.hpp>
#include <set>

#include "tidg/errors.hpp"
#include "tidg/mesh.hpp"

using namespace tidg;

namespace {

bool on_left(const Edge& e, const Mesh& m) {
  return std::abs(m.vertices()[e.vertices[0]].x()) < 1e-12 && std::abs(m.vertices()[e.vertices[1]].x()) < 1e-12;
}
bool anything(const Edge&, const Mesh&) { return true; }
bool nothing(const Edge&, const Mesh&) { return false; }

void expect_euler(const Mesh& m) {
  EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
}

}  // namespace

TEST(Mesh, UnitSquareSplit) {
  const Mesh m = rect_mesh(1, 1, 1, 1);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(m.num_edges(), 5);
  EXPECT_EQ(m.interior_edges().size(), 1u);
  expect_euler(m);
}

TEST(Mesh, CountsForBeamGrid) {
  const Mesh m = rect_mesh(10, 2, 80, 16, -1);
  EXPECT_EQ(m.num_triangles(), 2560);
  EXPECT_EQ(m.num_vertices(), 1377);
  expect_euler(m);
  EXPECT_NEAR(m.total_area(), 20.0, 1e-12);
}

TEST(Mesh, EulerTwoByTwo) {
  const Mesh m = rect_mesh(1, 1, 2, 2);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_edges(), 16);
  EXPECT_EQ(m.num_triangles(), 8);
  expect_euler(m);
}

TEST(Mesh, OrientationAndNormals) {
  const Mesh m = rect_mesh(3, 2, 5, 4, -1);
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_GT(m.areas()[t], 0.0);
  for (const Edge& e : m.edges()) {
    EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
    const Vec2 d = m.vertices()[e.vertices[1]] - m.vertices()[e.vertices[0]];
    EXPECT_NEAR(e.normal.dot(d), 0.0, 1e-13);
    EXPECT_NEAR(e.length, d.norm(), 1e-14);
    // Outward from the owner: points away from the owner's centroid.
    const auto pts = m.triangle_points(e.owner);
    const Vec2 c = (pts[0] + pts[1] + pts[2]) / 3.0;
    EXPECT_GT(e.normal.dot(e.midpoint - c), 0.0);
    if (e.neighbor) {
      EXPECT_LT(e.owner, *e.neighbor);
    }
  }
  // Sum of outward normals times length vanishes on each element.
  for (int t = 0; t < m.num_triangles(); ++t) {
    Vec2 sum = Vec2::Zero();
    for (int j = 0; j < 3; ++j) {
      const Edge& e = m.edges()[m.element_edges(t)[j]];
      sum += (e.owner == t ? 1.0 : -1.0) * e.length * e.normal;
    }
    EXPECT_LT(sum.norm(), 1e-13);
  }
}

TEST(Mesh, CookMembrane) {
  const Mesh one = cook_mesh(1);
  EXPECT_EQ(one.num_triangles(), 2);
  const Mesh m = cook_mesh(32);
  EXPECT_EQ(m.num_triangles(), 2048);
  EXPECT_NEAR(m.total_area(), 1440.0, 1e-9);
  expect_euler(m);
  EXPECT_EQ(m.dirichlet_edges().size(), 32u);
  EXPECT_TRUE(m.find_vertex(Vec2(48, 60)).has_value());
  for (int e : m.dirichlet_edges()) EXPECT_TRUE(on_left(m.edges()[e], m));
}

TEST(Mesh, ClassifyEdges) {
  const Mesh square = classify_edges(rect_mesh(1, 1, 1, 1), on_left, anything);
  EXPECT_EQ(square.dirichlet_edges().size(), 1u);
  EXPECT_EQ(square.neumann_edges().size(), 3u);
  EXPECT_EQ(square.interior_or_dirichlet_edges().size(), 2u);

  const Mesh beam = classify_edges(rect_mesh(10, 2, 40, 8, -1), on_left, anything);
  EXPECT_EQ(beam.dirichlet_edges().size(), 8u);
}

TEST(Mesh, DirichletWinsOnOverlap) {
  const Mesh m = classify_edges(rect_mesh(1, 1, 2, 2), anything, anything);
  EXPECT_EQ(m.dirichlet_edges().size(), 8u);
  EXPECT_TRUE(m.neumann_edges().empty());
}

TEST(Mesh, UncoveredBoundaryEdge) {
  try {
    classify_edges(rect_mesh(1, 1, 1, 1), nothing, nothing);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UncoveredBoundaryEdge);
  }
}

TEST(Mesh, InvalidDimensions) {
  EXPECT_THROW(rect_mesh(1, 1, 0, 1), Error);
  EXPECT_THROW(rect_mesh(-1, 1, 1, 1), Error);
  EXPECT_THROW(cook_mesh(0), Error);
}

TEST(Mesh, SizeHalvesUnderRefinement) {
  const double h0 = rect_mesh(10, 2, 10, 2, -1).h();
  const double h1 = rect_mesh(10, 2, 20, 4, -1).h();
  EXPECT_NEAR(h0, std::hypot(1.0, 1.0), 1e-14);
  EXPECT_NEAR(h0 / h1, 2.0, 1e-14);
}

TEST(Mesh, JsonDump) {
  const auto j = nlohmann::json::parse(mesh_to_json(rect_mesh(1, 1, 1, 1)));
  EXPECT_EQ(j.at("vertices").size(), 4u);
  EXPECT_EQ(j.at("triangles").size(), 2u);
  EXPECT_EQ(j.at("edges").size(), 5u);
}
