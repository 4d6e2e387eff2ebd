#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "navkit/geometry.hpp"

namespace navkit {

enum class Exec { Serial, Parallel };

struct CameraModel {
  double alpha = kPi / 2.0;  // visibility angle

  void validate() const;
};

/// Ground radius seen from altitude z over ground at elevation z_g.
double fov_radius(double z, double alpha, double z_g = 0.0);

struct WaypointSet {
  std::vector<Point3> points;
  double delta = 0.0;
  double c1 = 1.0;  // pairwise separation
  double c2 = 0.5;  // terrain clearance
};

struct LatticePlacement {
  double lambda = 0.0;  // [0, pi/3)
  double x0 = 0.0;
  double y0 = 0.0;
};

/// Vertices of the equilateral lattice of side sqrt(3) R whose hexagonal
/// Voronoi cells (circumradius R) intersect the region.
std::vector<Point2> triangular_lattice(const PolygonWithHoles& region, double R, const LatticePlacement& placement);

WaypointSet lattice_waypoints(const PolygonWithHoles& region, double z, double alpha,
                              const LatticePlacement& placement);

struct SweepPoint {
  double z = 0.0;
  std::size_t count = 0;
  double source_z = 0.0;  // altitude whose lattice realizes the count
  LatticePlacement placement;
};

struct AltitudeSweep {
  std::vector<SweepPoint> curve;  // decreasing altitude
  std::optional<double> z_star;
  WaypointSet waypoints;          // at z_star
};

struct SweepConfig {
  double z_min = 100.0;
  double z_max = 120.0;
  double step = 1.0;
  int trials = 64;
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  Exec exec = Exec::Parallel;
};

/// Best of `trials` seeded placements per altitude. A set found at a lower
/// altitude still covers from higher up, so the curve takes running minima
/// upward and is non-increasing in z. z_star is the lowest altitude meeting
/// the budget (the overall minimum count when no budget is given).
AltitudeSweep altitude_sweep(const PolygonWithHoles& region, double alpha, const SweepConfig& config);

struct CoverageReport {
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  std::vector<Point2> uncovered_points;  // first few, for diagnostics
};

/// 1 m style grid oracle without occlusion: samples at cell centers of the
/// given spacing inside the region, covered when within R of a waypoint.
CoverageReport grid_coverage(const PolygonWithHoles& region, const std::vector<Point2>& centers, double R,
                             double spacing, Exec exec);

struct TerrainObstacle {
  Ring bottom;  // footprint G_i on the ground
  Ring top;     // E_i, same vertex count, inside the footprint
  double height = 0.0;
};

struct Terrain {
  PolygonWithHoles region;
  std::vector<TerrainObstacle> obstacles;
  double c = 0.2;
  double z_min = 4.0;
  double z_max = 60.0;
  double c1 = 1.0;
  double c2 = 0.5;

  /// Region minus obstacle footprints.
  PolygonWithHoles free_ground() const;
  void validate() const;
};

/// Inside the FOV cone (inclusive) and the sight line does not pass through
/// any obstacle interior.
bool visibility_check(const Point3& waypoint, const Point3& ground, double alpha, const Terrain& terrain);

/// Distance from p to the solid obstacle (0 inside).
double obstacle_distance(const Point3& p, const TerrainObstacle& o);

class SeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VantageResult {
  WaypointSet set;
  std::vector<std::string> kinds;  // "plain" or "obstacle" per waypoint
  std::size_t triangulation_vertices = 0;
  std::size_t bound = 0;           // floor(vertex count / 3)
};

/// Art-gallery placement: smallest 3-coloring class of the bridged free-ground
/// triangulation, lifted to altitudes that see every incident triangle.
VantageResult vantage_waypoints_3d(const Terrain& terrain, double alpha);

/// Occlusion-aware oracle over free ground samples at cell centers.
CoverageReport visibility_coverage(const Terrain& terrain, const std::vector<Point3>& waypoints, double alpha,
                                   double spacing, Exec exec);

/// Waypoint file: CSV "x,y,z,delta", one waypoint per line.
struct WaypointFile {
  std::vector<Point3> points;
  std::vector<double> deltas;
};

void write_waypoints(std::ostream& os, const std::vector<Point3>& points, const std::vector<double>& deltas);
/// Accepts "x,y" or "x,y,z" rows too; missing columns read as 0.
WaypointFile read_waypoints(std::istream& is);

}  // namespace navkit
