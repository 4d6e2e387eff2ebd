#include <gtest/gtest.h>

#include <cmath>

#include "navkit/geometry.hpp"
#include "navkit/rng.hpp"
#include "oracles.hpp"

using namespace navkit;

namespace {

Ring regular_ngon(int n, double r, Point2 c = {0.0, 0.0}, double phase = 0.0) {
  Ring ring;
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2.0 * kPi * k / n;
    ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return ring;
}

double mesh_area_oracle(const TriangulationMesh& mesh) {
  double a = 0.0;
  for (const auto& t : mesh.triangles)
    a += std::abs(oracle::shoelace({mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]}));
  return a;
}

bool proper_coloring(const ColoringResult& c) {
  for (const auto& t : c.mesh.triangles) {
    const int a = c.mesh.colors[t[0]], b = c.mesh.colors[t[1]], d = c.mesh.colors[t[2]];
    if (a == b || b == d || a == d || a < 0 || b < 0 || d < 0) return false;
  }
  return true;
}

// Comb with k spikes: two bottom corners, k tips and two valley vertices
// between neighbouring spikes, 3k vertices in total.
Ring comb(int k) {
  Ring top;
  for (int j = 0; j < k; ++j) {
    top.push_back({3.0 * j + 1.0, 5.0});
    if (j + 1 < k) {
      top.push_back({3.0 * j + 2.0, 1.0});
      top.push_back({3.0 * j + 3.0, 1.0});
    }
  }
  Ring ring{{0.0, 0.0}, {3.0 * k - 1.0, 0.0}};
  ring.insert(ring.end(), top.rbegin(), top.rend());
  return ring;
}

}  // namespace

TEST(Geometry, BridgeSquareWithTriangleHoleHasNineVertices) {
  auto poly = PolygonWithHoles::make({{0, 0}, {10, 0}, {10, 10}, {0, 10}}, {{{4, 4}, {6, 4}, {5, 6}}});
  const Ring ring = bridge_holes(poly);
  EXPECT_EQ(ring.size(), 9u);
  EXPECT_NEAR(oracle::shoelace(ring), 100.0 - 2.0, 1e-9);
}

TEST(Geometry, BridgeWithoutHolesIsIdentity) {
  const Ring outer{{0, 0}, {4, 0}, {4, 3}, {0, 3}};
  auto poly = PolygonWithHoles::make(outer);
  const Ring ring = bridge_holes(poly);
  ASSERT_EQ(ring.size(), outer.size());
  for (std::size_t i = 0; i < ring.size(); ++i) EXPECT_EQ(ring[i], outer[i]);
}

TEST(Geometry, BridgeHexagonWithTwoHolesHasSixteenVertices) {
  const Ring outer = regular_ngon(6, 10.0);
  const Ring h1{{-5, -1}, {-3, -1}, {-4, 1}};
  const Ring h2{{3, -1}, {5, -1}, {4, 1}};
  auto poly = PolygonWithHoles::make(outer, {h1, h2});
  const Ring ring = bridge_holes(poly);
  EXPECT_EQ(ring.size(), 16u);
  const double expected = std::abs(oracle::shoelace(outer)) - std::abs(oracle::shoelace(h1)) -
                          std::abs(oracle::shoelace(h2));
  EXPECT_NEAR(oracle::shoelace(ring), expected, 1e-9 * expected);
  const TriangulationMesh mesh = triangulate(ring);
  EXPECT_EQ(mesh.triangles.size(), 14u);
  EXPECT_NEAR(mesh_area_oracle(mesh), expected, 1e-9 * expected);
}

TEST(Geometry, BridgeRejectsDegenerateRing) {
  PolygonWithHoles poly{{{0, 0}, {1, 0}}, {}};
  EXPECT_THROW(bridge_holes(poly), GeometryError);
}

TEST(Geometry, TriangulateSquare) {
  const TriangulationMesh mesh = triangulate({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(mesh.triangles.size(), 2u);
  EXPECT_NEAR(mesh_area_oracle(mesh), 1.0, 1e-12);
}

TEST(Geometry, TriangulateOctagon) {
  const Ring ring = regular_ngon(8, 3.0);
  const TriangulationMesh mesh = triangulate(ring);
  EXPECT_EQ(mesh.triangles.size(), 6u);
  EXPECT_NEAR(mesh_area_oracle(mesh), oracle::shoelace(ring), 1e-9);
}

TEST(Geometry, TriangulateTriangleIsItself) {
  const TriangulationMesh mesh = triangulate({{0, 0}, {2, 0}, {0, 1}});
  ASSERT_EQ(mesh.triangles.size(), 1u);
  EXPECT_NEAR(mesh_area_oracle(mesh), 1.0, 1e-12);
}

TEST(Geometry, TriangulateRejectsSelfIntersection) {
  EXPECT_THROW(triangulate({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
}

TEST(Geometry, TriangulateNonConvexKeepsArea) {
  const Ring ring = comb(5);
  const TriangulationMesh mesh = triangulate(ring);
  EXPECT_EQ(mesh.triangles.size(), ring.size() - 2);
  EXPECT_NEAR(mesh_area_oracle(mesh), oracle::shoelace(ring), 1e-9);
}

TEST(Geometry, ThreeColorSingleTriangle) {
  const ColoringResult c = three_color(triangulate({{0, 0}, {2, 0}, {0, 1}}));
  EXPECT_TRUE(proper_coloring(c));
  EXPECT_EQ(c.class_sizes[0], 1u);
  EXPECT_EQ(c.class_sizes[1], 1u);
  EXPECT_EQ(c.class_sizes[2], 1u);
  EXPECT_EQ(c.smallest_class.size(), 1u);
}

TEST(Geometry, ThreeColorNonagon) {
  const ColoringResult c = three_color(triangulate(regular_ngon(9, 2.0)));
  EXPECT_TRUE(proper_coloring(c));
  EXPECT_LE(c.smallest_class.size(), 3u);
}

TEST(Geometry, ThreeColorCombNeedsOneGuardPerSpike) {
  for (int k = 2; k <= 6; ++k) {
    const Ring ring = comb(k);
    ASSERT_EQ(ring.size(), static_cast<std::size_t>(3 * k));
    const ColoringResult c = three_color(triangulate(ring));
    EXPECT_TRUE(proper_coloring(c));
    EXPECT_EQ(c.smallest_class.size(), static_cast<std::size_t>(k)) << "k=" << k;
  }
}

TEST(Geometry, ThreeColorRejectsNonTree) {
  TriangulationMesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}, {0, 1, 2}};
  EXPECT_THROW(three_color(mesh), GeometryError);
}

TEST(Geometry, PointInRegionBasics) {
  auto poly = PolygonWithHoles::make({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_TRUE(point_in_region({0.5, 0.5}, poly));
  EXPECT_TRUE(point_in_region({1.0, 0.5}, poly));
  auto holed = PolygonWithHoles::make({{0, 0}, {10, 0}, {10, 10}, {0, 10}}, {{{4, 4}, {6, 4}, {6, 6}, {4, 6}}});
  EXPECT_FALSE(point_in_region({5, 5}, holed));
  EXPECT_TRUE(point_in_region({2, 2}, holed));
}

TEST(Geometry, PointInRegionMatchesWindingNumber) {
  const Ring outer{{0, 0}, {10, 0}, {10, 6}, {6, 6}, {6, 10}, {0, 10}};
  const Ring h1{{1, 1}, {3, 1}, {2, 3}};
  const Ring h2{{2, 6}, {4, 6}, {4, 8}, {2, 8}};
  auto poly = PolygonWithHoles::make(outer, {h1, h2});
  Rng rng(11);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point2 p{rng.uniform(-1.0, 11.0), rng.uniform(-1.0, 11.0)};
    const bool expected = oracle::winding_number(p, outer) != 0 && oracle::winding_number(p, h1) == 0 &&
                          oracle::winding_number(p, h2) == 0;
    if (point_in_region(p, poly) != expected) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Geometry, MakeRejectsBadHoles) {
  const Ring outer{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  EXPECT_THROW(PolygonWithHoles::make(outer, {{{20, 20}, {21, 20}, {21, 21}}}), GeometryError);
  EXPECT_THROW(PolygonWithHoles::make(outer, {{{1, 1}, {5, 1}, {5, 5}}, {{2, 1.5}, {4, 1.5}, {4, 3}}}),
               GeometryError);
  EXPECT_THROW(PolygonWithHoles::make({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
}

TEST(Geometry, ConvexHullDropsInteriorAndCollinear) {
  const std::vector<Point2> pts{{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}};
  const auto hull = convex_hull(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_NEAR(oracle::shoelace(hull), 4.0, 1e-12);
}
