#include "navkit/reactive3d.hpp"

#include <algorithm>
#include <cmath>

#include "navkit/reactive2d.hpp"

namespace navkit {

double sphere_distance(const Point3& c, const Sphere& sphere) {
  const double d = distance(c, sphere.center) - sphere.radius;
  if (d < 0.0) throw CollisionError("robot inside covering sphere " + std::to_string(sphere.id));
  return d;
}

namespace {

Vec3 rotate_about(const Vec3& v, const Vec3& axis, double a) {
  // Rodrigues with a unit axis.
  return v * std::cos(a) + cross(axis, v) * std::sin(a) + axis * (dot(axis, v) * (1.0 - std::cos(a)));
}

}  // namespace

AvoidingPlane avoiding_plane(const Vec3& v_in, const Vec3& h_in) {
  const Vec3 v = normalized(v_in);
  Vec3 h = normalized(h_in);
  Vec3 n = cross(h, v);
  if (norm(n) < 1e-9) {
    const Vec3 ref = std::abs(h.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    h = rotate_about(h, normalized(cross(h, ref)), 1e-3);
    n = cross(h, v);
  }
  AvoidingPlane p;
  p.normal = normalized(n);
  p.lateral = normalized(cross(v, p.normal));
  return p;
}

const char* to_string(Mode3D m) { return m == Mode3D::Pursuit ? "R1" : "R2"; }

void Reactive3DParams::validate() const {
  if (!(d_safe > 0.0 && d_trig > d_safe)) throw std::invalid_argument("need d_trig > d_safe > 0");
  if (!(l > 0.0 && delta > 0.0)) throw std::invalid_argument("l and delta must be positive");
  if (!(align_tol > 0.0)) throw std::invalid_argument("align_tol must be positive");
  if (!(sensor_range > d_trig)) throw std::invalid_argument("sensor_range must exceed d_trig");
}

Vec3 control3d(Mode3D mode, double d, double d_rate, const Reactive3DParams& params, double u_max,
               const Vec3& lateral, int gamma, const Vec3& v_in, const Vec3& H_in, double dt) {
  const Vec3 v = normalized(v_in);
  Vec3 u{};
  if (mode == Mode3D::Avoid) {
    const double s = d_rate + saturate(d - params.d_safe, params.l, params.delta);
    u = lateral * (gamma * sgn(s) * u_max);
  } else {
    const Vec3 H = normalized(H_in);
    Vec3 perp = H - v * dot(H, v);
    double pn = norm(perp);
    if (pn < 1e-12) {
      if (dot(H, v) > 0.0) return {};
      const Vec3 ref = std::abs(v.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
      perp = cross(v, ref);
      pn = norm(perp);
    }
    const double angle = std::atan2(pn, dot(H, v));
    const double rate = std::min(u_max, angle / dt);
    u = perp * (rate / pn);
  }
  return u - v * dot(u, v);
}

Mode3D mode_switch3d(Mode3D mode, double d, double d_rate, const Vec3& v, const Vec3& H,
                     const Reactive3DParams& params) {
  if (mode == Mode3D::Pursuit) return d <= params.d_trig && d_rate < 0.0 ? Mode3D::Avoid : Mode3D::Pursuit;
  const double c = std::clamp(dot(normalized(v), normalized(H)), -1.0, 1.0);
  if (d < params.d_trig && std::acos(c) < params.align_tol) return Mode3D::Pursuit;
  return Mode3D::Avoid;
}

NearestSphere nearest_sphere(const Point3& c, const std::vector<Sphere>& spheres) {
  NearestSphere best;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    const double d = distance(c, spheres[i].center) - spheres[i].radius;
    if (d < best.distance ||
        (d == best.distance && best.index >= 0 && spheres[i].id < spheres[static_cast<std::size_t>(best.index)].id)) {
      best.distance = d;
      best.index = static_cast<int>(i);
    }
  }
  return best;
}

bool segment_clear(const Point3& a, const Point3& b, const std::vector<Sphere>& spheres, double clearance) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  for (const Sphere& s : spheres) {
    double t = len2 > 0.0 ? dot(s.center - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (distance(a + ab * t, s.center) - s.radius < clearance) return false;
  }
  return true;
}

Reactive3DNavigator::Reactive3DNavigator(Reactive3DParams params, double u_max, double dt, Point3 target)
    : params_(params), u_max_(u_max), dt_(dt), target_(target) {
  params_.validate();
}

Reactive3DNavigator::Output Reactive3DNavigator::step(const Vehicle3DState& s, const std::vector<Sphere>& spheres) {
  Output out;
  const NearestSphere ns = nearest_sphere(s.position, spheres);
  const Vec3 to_target = target_ - s.position;
  const Vec3 H = norm(to_target) > 0.0 ? normalized(to_target) : s.heading;
  double d = kInf;
  double rate = 0.0;
  if (ns.index >= 0 && ns.distance <= params_.sensor_range) {
    const Sphere& sp = spheres[static_cast<std::size_t>(ns.index)];
    d = sphere_distance(s.position, sp);
    if (prev_d_ && tracked_ == sp.id) rate = (d - *prev_d_) / dt_;
    tracked_ = sp.id;
    prev_d_ = d;
  } else {
    tracked_ = -1;
    prev_d_.reset();
  }
  out.d = d;

  Mode3D next = mode_;
  if (std::isfinite(d)) {
    next = mode_switch3d(mode_, d, rate, s.heading, H, params_);
    if (next == Mode3D::Avoid && d >= params_.d_trig && segment_clear(s.position, target_, spheres, params_.d_safe))
      next = Mode3D::Pursuit;
  } else {
    next = Mode3D::Pursuit;
  }
  if (next != mode_) {
    out.events.push_back(std::string(to_string(mode_)) + "->" + to_string(next) +
                         (tracked_ >= 0 ? " sphere " + std::to_string(tracked_) : std::string()));
    mode_ = next;
  }
  out.mode = mode_;

  Vec3 lateral{};
  if (mode_ == Mode3D::Avoid) {
    const Sphere& sp = spheres[static_cast<std::size_t>(ns.index)];
    lateral = avoiding_plane(s.heading, sp.center - s.position).lateral;
  }
  out.u = control3d(mode_, d, rate, params_, u_max_, lateral, 1, s.heading, H, dt_);
  return out;
}

}  // namespace navkit
