#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace navkit {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kGeomEps = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
inline Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};
using Vec3 = Point3;

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator-(Point3 a) { return {-a.x, -a.y, -a.z}; }
inline Point3 operator*(Point3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Point3 operator*(double s, Point3 a) { return {a.x * s, a.y * s, a.z * s}; }
inline Point3 operator/(Point3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline bool operator==(Point3 a, Point3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline Point3 normalized(Point3 a) { return a / norm(a); }
inline Point2 xy(Point3 p) { return {p.x, p.y}; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

using Ring = std::vector<Point2>;

/// Shoelace signed area; positive for counter-clockwise rings.
double signed_area(std::span<const Point2> ring);

double distance_to_segment(Point2 p, Point2 a, Point2 b);
Point2 closest_on_segment(Point2 p, Point2 a, Point2 b);
bool on_segment(Point2 p, Point2 a, Point2 b, double eps = kGeomEps);
/// True when the open segments (a,b) and (c,d) cross at a single interior point.
bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d);
/// True when the closed segments share any point.
bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d);

bool ring_is_simple(const Ring& ring);
/// Crossing-number test; boundary points count as inside.
bool point_in_ring(Point2 p, const Ring& ring);

struct PolygonWithHoles {
  Ring outer;               // counter-clockwise
  std::vector<Ring> holes;  // clockwise

  /// Validates the rings and fixes their orientation.
  static PolygonWithHoles make(Ring outer, std::vector<Ring> holes = {});

  double area() const;
  std::size_t vertex_count() const;
};

bool point_in_region(Point2 p, const PolygonWithHoles& poly);
double distance_to_boundary(Point2 p, const PolygonWithHoles& poly);

/// Splices every hole into the outer ring through bridge diagonals. Each
/// bridge duplicates its two endpoints, so the result has n + sum(n_i) + 2i
/// vertices and forms a weakly simple ring with the region's area.
Ring bridge_holes(const PolygonWithHoles& poly);

struct TriangulationMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<int> colors;  // empty until colored

  double area() const;
};

/// Ear clipping of a (weakly) simple counter-clockwise ring.
TriangulationMesh triangulate(const Ring& ring);

struct ColoringResult {
  TriangulationMesh mesh;
  int smallest_color = 0;
  std::array<std::size_t, 3> class_sizes{};
  std::vector<std::size_t> smallest_class;  // vertex indices
};

/// Proper 3-coloring propagated across the dual tree of the triangulation.
ColoringResult three_color(TriangulationMesh mesh);

/// Counter-clockwise hull without collinear points (monotone chain).
std::vector<std::size_t> convex_hull_indices(std::span<const Point2> pts);
std::vector<Point2> convex_hull(std::vector<Point2> pts);

}  // namespace navkit
