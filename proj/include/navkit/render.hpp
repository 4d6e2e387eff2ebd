#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navkit/geometry.hpp"
#include "navkit/world.hpp"

namespace navkit {

struct SvgScene {
  std::optional<std::pair<Point2, Point2>> bounds;  // arena min/max; data extent when absent
  PolygonWithHoles region;                           // coverage region, empty when unused
  std::vector<Obstacle2D> obstacles;
  std::vector<Sphere> spheres;                       // drawn as their plan-view discs
  std::vector<Ring> footprints;
  std::vector<std::vector<Point2>> paths;
  std::vector<Point2> waypoints;
  std::optional<Point2> start;
  std::optional<Point2> target;
};

inline constexpr double kSvgSize = 1000.0;
inline constexpr double kSvgMargin = 0.05;

/// Standalone SVG on a fixed 1000x1000 viewBox with a 5% margin and a
/// uniform scale; y points up in world coordinates.
std::string render_svg(const SvgScene& scene);

}  // namespace navkit
