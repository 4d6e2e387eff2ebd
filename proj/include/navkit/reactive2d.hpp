#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navkit/qlearn.hpp"
#include "navkit/vehicle.hpp"
#include "navkit/world.hpp"

namespace navkit {

enum class NavMode { Initial, Pursuit, Follow };

const char* to_string(NavMode m);

struct ReactiveParams {
  double l = 0.08;
  double delta = 0.5;
  double d_safe = 0.5;
  double d_trig = 0.8;
  int gamma = 1;                // turn-side flag
  double sensor_range = 4.0;    // m
  int sensor_rays = 180;        // over the full circle
  double pass_clearance = 0.65; // clearance of pursued tangent lines

  void validate() const;
};

struct BoundaryReading {
  std::optional<double> d_min;
  std::optional<double> d_min_rate;
  std::optional<double> phi_tan;
  bool exit_tangent_available = false;
  int initial_sign = 1;  // which initial circle, +1 left / -1 right
};

/// l r for |r| <= delta, delta l sgn(r) otherwise.
double saturate(double r, double l, double delta);

int sgn(double x);

/// Bang-bang steering for the active mode; |u| <= u_M.
double control(NavMode mode, const BoundaryReading& reading, const ReactiveParams& params, double u_M);

enum class QDecision { None, Pursue, Follow };

NavMode transition(NavMode mode, const BoundaryReading& reading, const ReactiveParams& params,
                   QDecision decision);

struct SensedPoint {
  Point2 p;
  int id = -1;
};

struct TangentEvent {
  bool fired = false;
  std::array<QDecision, 2> actions{QDecision::Pursue, QDecision::Follow};
};

/// Fires when the line of sight to `goal` no longer points into the followed
/// boundary (it is locally tangent or leaving) and no sensed point lies within
/// the clearance of that line. In Initial mode the heading must also be
/// aligned with the line of sight to within align_tol.
TangentEvent detect_exit_tangent(NavMode mode, const UnicycleState& s, std::span<const SensedPoint> sensed,
                                 Point2 goal, int followed_id, const ReactiveParams& params,
                                 double align_tol);

struct Sensing2D {
  NearestObstacle nearest;
  std::vector<SensedPoint> points;
};

/// Ray sensor over the full circle plus the exact nearest boundary point.
Sensing2D sense_2d(const UnicycleState& s, const std::vector<Obstacle2D>& obstacles, double range, int rays);

struct DecisionRequest {
  StateId state = 0;
  std::vector<ActionId> actions;
  std::string kind;
};

/// Bearing bin of width 15 degrees in [0, 24).
int bearing_bin(double angle);

class ReactiveNavigator {
 public:
  struct Output {
    double u = 0.0;
    bool needs_decision = false;
    DecisionRequest request;
    std::vector<std::string> events;
  };

  ReactiveNavigator(ReactiveParams params, double v, double u_M, double dt, Point2 target);

  /// Control for one sample. When needs_decision is set nothing is committed;
  /// call again with the same inputs and the chosen action.
  Output step(const UnicycleState& s, const Sensing2D& sensing, std::optional<ActionId> decision);

  NavMode mode() const { return st_.mode; }

 private:
  struct Aim {
    double bearing = 0.0;
    bool target_clear = true;
    int blocker = -1;
  };
  struct State {
    NavMode mode = NavMode::Initial;
    int initial_sign = 0;
    int follow_gamma = 1;
    int followed = -1;
    bool suppress_exit = false;
    double lap_turn = 0.0;
    double prev_theta = 0.0;
    std::optional<double> prev_d;
    std::map<int, int> side_memory;
  };

  Aim compute_aim(const UnicycleState& s, std::span<const SensedPoint> pts, State& st) const;
  bool approaching(const UnicycleState& s, std::span<const SensedPoint> pts, int id, double bearing, double d) const;

  ReactiveParams params_;
  double v_;
  double u_M_;
  double dt_;
  Point2 target_;
  State st_;
};

}  // namespace navkit
