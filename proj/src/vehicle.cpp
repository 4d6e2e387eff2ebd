#include "navkit/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace navkit {

void VehicleLimits::validate() const {
  const double vals[] = {v, u_max_2d, V_min, V_max, u_max_3d, a_ver, a_hor, v_ver, v_hor};
  for (double x : vals)
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("vehicle limits must be positive");
  if (V_min > V_max) throw std::invalid_argument("V_min exceeds V_max");
}

UnicycleState step_unicycle(const UnicycleState& s, double v, double u, double dt, double u_max) {
  if (!(dt > 0.0)) throw ControlRejected("step_unicycle: dt must be positive");
  if (std::abs(u) > u_max * (1.0 + 1e-12)) throw ControlRejected("step_unicycle: |u| exceeds u_M");
  UnicycleState out;
  const double dth = u * dt;
  if (std::abs(dth) < 1e-12) {
    // Second-order expansion keeps the straight limit exact to rounding.
    const double mid = s.theta + 0.5 * dth;
    out.x = s.x + v * dt * std::cos(mid);
    out.y = s.y + v * dt * std::sin(mid);
  } else {
    const double th1 = s.theta + dth;
    out.x = s.x + v / u * (std::sin(th1) - std::sin(s.theta));
    out.y = s.y - v / u * (std::cos(th1) - std::cos(s.theta));
  }
  out.theta = wrap_angle(s.theta + dth);
  return out;
}

Vehicle3DState step_3d(const Vehicle3DState& s, double V, const Vec3& u, double dt,
                       const VehicleLimits& limits) {
  if (!(dt > 0.0)) throw ControlRejected("step_3d: dt must be positive");
  if (V < limits.V_min * (1.0 - 1e-12) || V > limits.V_max * (1.0 + 1e-12))
    throw ControlRejected("step_3d: speed outside [V_min, V_max]");
  const double w = norm(u);
  if (w > limits.u_max_3d * (1.0 + 1e-12)) throw ControlRejected("step_3d: |u| exceeds u_max");
  if (std::abs(dot(s.heading, u)) >= 1e-9) throw ControlRejected("step_3d: control not orthogonal to heading");
  Vehicle3DState out;
  if (w < 1e-15) {
    out.position = s.position + s.heading * (V * dt);
    out.heading = normalized(s.heading);
    return out;
  }
  const Vec3 perp = u - s.heading * dot(u, s.heading);
  const Vec3 uh = normalized(perp);
  const double a = w * dt;
  out.heading = normalized(s.heading * std::cos(a) + uh * std::sin(a));
  out.position = s.position + (s.heading * std::sin(a) + uh * (1.0 - std::cos(a))) * (V / w);
  return out;
}

Vec3 heading_vector(double theta, double psi) {
  return {std::cos(theta) * std::cos(psi), std::sin(theta) * std::cos(psi), std::sin(psi)};
}

void heading_angles(const Vec3& dir, double& theta, double& psi) {
  const Vec3 d = normalized(dir);
  psi = std::asin(std::clamp(d.z, -1.0, 1.0));
  theta = std::atan2(d.y, d.x);
}

bool check_average_curvature(std::span<const Point3> samples, double r_min) {
  if (samples.size() < 3) throw std::invalid_argument("check_average_curvature: fewer than 3 samples");
  if (!(r_min > 0.0)) throw std::invalid_argument("check_average_curvature: R_min must be positive");
  std::vector<Vec3> tangent;
  std::vector<double> s_mid;
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vec3 d = samples[k + 1] - samples[k];
    const double len = norm(d);
    if (len <= 1e-15) continue;
    tangent.push_back(d / len);
    s_mid.push_back(s + 0.5 * len);
    s += len;
  }
  for (std::size_t a = 0; a < tangent.size(); ++a) {
    for (std::size_t b = a + 1; b < tangent.size(); ++b) {
      const double ds = s_mid[b] - s_mid[a];
      if (ds >= 2.0 * r_min) break;
      if (norm(tangent[a] - tangent[b]) > ds / r_min * (1.0 + 1e-9) + 1e-12) return false;
    }
  }
  return true;
}

bool check_average_curvature(std::span<const Point2> samples, double r_min) {
  std::vector<Point3> lifted;
  lifted.reserve(samples.size());
  for (const Point2& p : samples) lifted.push_back({p.x, p.y, 0.0});
  return check_average_curvature(lifted, r_min);
}

}  // namespace navkit
