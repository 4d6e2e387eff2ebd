#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "navkit/geometry.hpp"

namespace navkit {

inline constexpr double kDefaultDt = 0.1;

struct UnicycleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // (-pi, pi]
};

struct Vehicle3DState {
  Point3 position;
  Vec3 heading{1.0, 0.0, 0.0};  // unit
};

struct VehicleLimits {
  double v = 0.5;                        // 2D forward speed, m/s
  double u_max_2d = 60.0 * kPi / 180.0;  // rad/s
  double V_min = 0.5;
  double V_max = 1.0;
  double u_max_3d = 0.5;  // rad/s
  double a_ver = 0.5;
  double a_hor = 1.2;
  double v_ver = 0.5;
  double v_hor = 1.2;

  double r_min_2d() const { return v / u_max_2d; }
  double r_min_3d(double V) const { return V / u_max_3d; }
  void validate() const;
};

class ControlRejected : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact arc integration over dt with constant speed v and turn rate u.
UnicycleState step_unicycle(const UnicycleState& s, double v, double u, double dt, double u_max);

/// Exact rotation of the heading toward u (u orthogonal to the heading) at
/// rate |u| with constant speed V; the heading is renormalized afterwards.
Vehicle3DState step_3d(const Vehicle3DState& s, double V, const Vec3& u, double dt,
                       const VehicleLimits& limits);

/// Heading/pitch form: xdot = v (cos th cos psi, sin th cos psi, sin psi).
Vec3 heading_vector(double theta, double psi);
void heading_angles(const Vec3& dir, double& theta, double& psi);

/// Arc-length Lipschitz bound on the tangent, tested on all pairs of chord
/// directions closer than 2 R_min in arc length (further pairs satisfy it
/// trivially since unit vectors differ by at most 2).
bool check_average_curvature(std::span<const Point3> samples, double r_min);
bool check_average_curvature(std::span<const Point2> samples, double r_min);

}  // namespace navkit
