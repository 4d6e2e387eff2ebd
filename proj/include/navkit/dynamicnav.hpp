#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navkit/qlearn.hpp"
#include "navkit/reactive2d.hpp"
#include "navkit/rng.hpp"
#include "navkit/vehicle.hpp"
#include "navkit/world.hpp"

namespace navkit {

struct SensingDisc {
  double r_s = 2.5;
  int ray_count = 181;  // uniform over [theta - pi/2, theta + pi/2]

  void validate() const;
};

/// Angles are absolute and unwrapped around the heading theta.
struct BinaryScan {
  double theta = 0.0;
  std::vector<double> angles;
  std::vector<std::uint8_t> bits;
};

/// Bit k is set iff the boundary of the obstacles grown by `inflate` lies
/// within r_s cos(alpha_k - theta) along ray k. When the robot is already
/// inside a grown boundary, rays pointing toward that obstacle are set.
BinaryScan scan(const std::vector<Obstacle2D>& obstacles, const UnicycleState& s, const SensingDisc& disc,
                double inflate = 0.0);

struct FreeInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double a) const { return lo <= a && a <= hi; }
};

struct FreeIntervalSet {
  std::vector<FreeInterval> intervals;  // increasing angle
  int m = 0;
};

/// Maximal zero runs; interval ends sit half a ray spacing beyond the outer
/// free rays, clamped to the span.
FreeIntervalSet free_intervals(const BinaryScan& scan);

/// Interval indices ordered by deviation from theta (0 when theta is inside),
/// ties by lower index.
std::vector<int> closeness_order(const FreeIntervalSet& set, double theta);

class NoFreeInterval : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HeadingChoice {
  int interval = -1;
  int rank = 0;  // 0 closest, 1 next-closest
  double C = 0.0;
};

/// Closest interval with probability p, next-closest with 1 - p. A single
/// interval is chosen without drawing.
HeadingChoice select_heading(const FreeIntervalSet& set, double theta, double p, Rng& rng);

/// Same choice driven by an explicit rank instead of a draw.
HeadingChoice select_heading_rank(const FreeIntervalSet& set, double theta, int rank);

double dynamic_control(int m, double theta_target, double C, double theta, double u_M);

struct DynamicParams {
  SensingDisc disc;
  double d_safe = 1.0;
  double scan_margin = 0.8;  // extra growth on top of d_safe

  void validate() const;
};

class DynamicNavigator {
 public:
  struct Output {
    double u = 0.0;
    int m = 0;
    bool needs_decision = false;
    DecisionRequest request;
    std::vector<std::string> events;
  };

  DynamicNavigator(DynamicParams params, double u_M, Point2 target);

  /// Same decision protocol as ReactiveNavigator: when needs_decision is set
  /// nothing is committed. Actions are closeness ranks {0, 1}.
  Output step(const UnicycleState& s, const std::vector<Obstacle2D>& obstacles, std::optional<ActionId> decision);

 private:
  DynamicParams params_;
  double u_M_;
  Point2 target_;
  int prev_m_ = 0;
  int prev_count_ = 0;
  std::optional<double> committed_;  // absolute heading C of the chosen interval
};

}  // namespace navkit
