#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "navkit/geometry.hpp"

namespace navkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Planar obstacle: a disc or a simple polygon (counter-clockwise).
struct Obstacle2D {
  int id = 0;
  bool is_disc = true;
  Point2 center;
  double radius = 0.0;
  Ring ring;

  static Obstacle2D disc(int id, Point2 c, double r);
  static Obstacle2D polygon(int id, Ring ring);

  /// Distance from p to the obstacle; 0 inside.
  double distance(Point2 p) const;
  Point2 nearest_point(Point2 p) const;
  bool contains(Point2 p) const;
  /// Distance along the unit ray (o, dir) to the boundary grown by `inflate`;
  /// 0 if o already lies within the grown shape, nullopt on a miss.
  std::optional<double> ray_hit(Point2 o, Point2 dir, double inflate) const;
  Obstacle2D translated(Point2 d) const;
};

/// Obstacle moving along a polyline at constant speed, back and forth or
/// around a closed loop. The shape is given relative to the script point.
struct MovingObstacle {
  Obstacle2D shape;
  std::vector<Point2> path;
  double speed = 0.0;
  bool loop = false;

  Point2 position(double t) const;
  Obstacle2D at(double t) const;
};

struct World2D {
  std::vector<Obstacle2D> statics;
  std::vector<MovingObstacle> movers;

  std::vector<Obstacle2D> snapshot(double t) const;
};

struct NearestObstacle {
  double distance = kInf;
  Point2 point;
  int id = -1;
};

NearestObstacle nearest_obstacle(Point2 p, const std::vector<Obstacle2D>& obstacles);

struct RayHit {
  double range = kInf;
  int id = -1;
};

RayHit cast_ray(Point2 o, Point2 dir, double inflate, const std::vector<Obstacle2D>& obstacles);

struct Sphere {
  int id = 0;
  Point3 center;
  double radius = 1.0;
};

}  // namespace navkit
