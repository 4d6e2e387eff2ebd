#pragma once

// Independent reference computations used by the unit tests and the
// acceptance runner. None of these call into the library code they check.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "navkit/curves.hpp"
#include "navkit/geometry.hpp"
#include "navkit/qlearn.hpp"

namespace oracle {

struct DubinsBest {
  double length = 0.0;
  navkit::DubinsWord word = navkit::DubinsWord::LSL;
};

/// Length of one word found by scanning its first turn angle on a 1e-3 rad
/// grid and refining each sign change of the closure residual by bisection.
std::optional<double> dubins_word_length(navkit::Pose2 a, navkit::Pose2 b, double r, navkit::DubinsWord w);

/// Minimum over the six words, ties to the earlier word.
DubinsBest dubins_brute(navkit::Pose2 a, navkit::Pose2 b, double r);

/// Exact Q fixed point of Q = R + gamma max Q by repeated sweeps.
std::map<std::pair<navkit::StateId, navkit::ActionId>, double> value_iteration(
    const std::map<navkit::StateId, std::vector<navkit::TabularEnv::Edge>>& edges,
    const std::vector<navkit::StateId>& terminals, double gamma);

/// Breadth-first shortest path length on a 4-connected grid with walls.
int grid_bfs(int w, int h, const std::vector<std::pair<int, int>>& walls, std::pair<int, int> from,
             std::pair<int, int> to);

/// Winding number of the ring around p (0 outside).
int winding_number(navkit::Point2 p, const std::vector<navkit::Point2>& ring);

double shoelace(const std::vector<navkit::Point2>& ring);

navkit::Point3 de_casteljau(const navkit::CubicBezier& c, double t);

/// Straight-line rest-to-rest time with speed cap v and acceleration a.
double rest_to_rest_time(double length, double v, double a);

}  // namespace oracle
