#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "navkit/geometry.hpp"

namespace navkit {

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

double bernstein(int i, int n, double t);

struct CubicBezier {
  std::array<Point3, 4> p{};

  Point3 eval(double t) const;
  Point3 derivative(double t) const;
  Point3 second_derivative(double t) const;
  double curvature(double t) const;
};

/// Evaluates the Bernstein form; t must lie in [0, 1].
Point3 bezier_eval(const CubicBezier& curve, double t);

enum class DubinsWord { LSL, LSR, RSL, RSR, RLR, LRL };

std::string_view to_string(DubinsWord w);

struct DubinsPath {
  Pose2 start;
  double radius = 1.0;
  DubinsWord word = DubinsWord::LSL;
  // Turn segments in radians, straight segments in meters.
  std::array<double, 3> params{};
  bool degenerate = false;  // start == goal

  double length() const;
  double segment_length(int k) const;
  bool is_turn(int k) const;
  /// +1 for a left turn, -1 for a right turn, 0 for a straight segment.
  int turn_sign(int k) const;
  Pose2 sample(double s) const;
  Pose2 end() const { return sample(length()); }
};

/// Shortest of the six words. Ties go to the earlier word in the order
/// LSL, LSR, RSL, RSR, RLR, LRL.
DubinsPath dubins_shortest(Pose2 start, Pose2 goal, double radius);

/// All feasible words for the pair, in the tie-break order.
std::vector<DubinsPath> dubins_candidates(Pose2 start, Pose2 goal, double radius);

/// A joint where two Bezier pieces meet: position and unit tangent direction
/// given by heading theta and pitch psi.
struct Joint {
  Point3 position;
  double theta = 0.0;
  double psi = 0.0;
};

Vec3 direction_from_angles(double theta, double psi);

struct TangentLengths {
  double la = 1.0;  // leaving joint i
  double lb = 1.0;  // arriving at joint i+1
};

struct CompositeTrajectory {
  std::vector<CubicBezier> pieces;
  std::vector<TangentLengths> tangents;
  std::vector<Joint> joints;
  bool closed = false;

  double length(int samples_per_piece = 64) const;
};

/// Builds one cubic piece per consecutive joint pair. With closed=true the
/// last joint is joined back to the first. A ring whose first and last
/// positions coincide is treated as closed at the seam.
CompositeTrajectory stitch_smooth(std::vector<Joint> joints, std::vector<TangentLengths> tangents,
                                  bool closed);

struct SmoothnessResidual {
  double position = 0.0;       // max |P3^i - P0^j|
  double proportional = 0.0;   // max |l_a^j t_b^i - l_b^i t_a^j|
};

SmoothnessResidual smoothness_residual(const CompositeTrajectory& traj);

}  // namespace navkit
