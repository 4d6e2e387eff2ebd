#include "navkit/reactive2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace navkit {

const char* to_string(NavMode m) {
  switch (m) {
    case NavMode::Initial: return "R1";
    case NavMode::Pursuit: return "R2";
    case NavMode::Follow: return "R3";
  }
  return "?";
}

void ReactiveParams::validate() const {
  if (!(l > 0.0 && delta > 0.0)) throw std::invalid_argument("l and delta must be positive");
  if (!(d_safe > 0.0 && d_trig > d_safe)) throw std::invalid_argument("need d_trig > d_safe > 0");
  if (gamma != 1 && gamma != -1) throw std::invalid_argument("gamma must be +1 or -1");
  if (!(sensor_range > 0.0) || sensor_rays < 8) throw std::invalid_argument("bad sensor configuration");
  if (!(pass_clearance >= d_safe)) throw std::invalid_argument("pass_clearance must be >= d_safe");
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double saturate(double r, double l, double delta) {
  if (std::abs(r) <= delta) return l * r;
  return delta * l * sgn(r);
}

double control(NavMode mode, const BoundaryReading& rd, const ReactiveParams& p, double u_M) {
  switch (mode) {
    case NavMode::Initial:
      return (rd.initial_sign >= 0 ? 1.0 : -1.0) * u_M;
    case NavMode::Pursuit:
      if (!rd.phi_tan) throw std::invalid_argument("control: pursuit needs phi_tan");
      return p.gamma * sgn(*rd.phi_tan) * u_M;
    case NavMode::Follow: {
      if (!rd.d_min || !rd.d_min_rate) throw std::invalid_argument("control: follow needs d_min and its rate");
      const double s = *rd.d_min_rate + saturate(*rd.d_min - p.d_safe, p.l, p.delta);
      return p.gamma * sgn(s) * u_M;
    }
  }
  return 0.0;
}

NavMode transition(NavMode mode, const BoundaryReading& rd, const ReactiveParams& p, QDecision decision) {
  switch (mode) {
    case NavMode::Initial:
      return rd.exit_tangent_available ? NavMode::Pursuit : NavMode::Initial;
    case NavMode::Pursuit:
      if (rd.d_min && rd.d_min_rate && *rd.d_min < p.d_trig && *rd.d_min_rate < 0.0) return NavMode::Follow;
      return NavMode::Pursuit;
    case NavMode::Follow:
      if (rd.exit_tangent_available && decision == QDecision::Pursue) return NavMode::Pursuit;
      return NavMode::Follow;
  }
  return mode;
}

TangentEvent detect_exit_tangent(NavMode mode, const UnicycleState& s, std::span<const SensedPoint> sensed,
                                 Point2 goal, int followed_id, const ReactiveParams& params,
                                 double align_tol) {
  TangentEvent ev;
  const Point2 pos{s.x, s.y};
  const Point2 to_goal = goal - pos;
  const double len = norm(to_goal);
  if (len == 0.0) {
    ev.fired = true;
    return ev;
  }
  const Point2 g = to_goal / len;
  if (mode == NavMode::Initial &&
      std::abs(wrap_angle(std::atan2(g.y, g.x) - s.theta)) > align_tol)
    return ev;

  // Nearest sensed point of the followed obstacle (any obstacle when none).
  double d_near = kInf;
  Point2 q{};
  for (const SensedPoint& sp : sensed) {
    if (followed_id >= 0 && sp.id != followed_id) continue;
    const double d = distance(sp.p, pos);
    if (d < d_near) {
      d_near = d;
      q = sp.p;
    }
  }
  if (mode == NavMode::Follow && std::isfinite(d_near) && d_near > 0.0) {
    const Point2 n = (pos - q) / d_near;
    if (dot(g, n) < 0.0) return ev;  // still heading into the boundary
  }
  const double clearance = std::min(params.d_safe, d_near) - 1e-9;
  for (const SensedPoint& sp : sensed) {
    const Point2 r = sp.p - pos;
    const double t = dot(r, g);
    if (t <= 0.0 || t > len) continue;
    if (std::abs(cross(g, r)) < clearance) return ev;
  }
  ev.fired = true;
  return ev;
}

Sensing2D sense_2d(const UnicycleState& s, const std::vector<Obstacle2D>& obstacles, double range, int rays) {
  Sensing2D out;
  const Point2 pos{s.x, s.y};
  out.nearest = nearest_obstacle(pos, obstacles);
  for (int k = 0; k < rays; ++k) {
    const double a = s.theta + 2.0 * kPi * k / rays;
    const Point2 dir{std::cos(a), std::sin(a)};
    const RayHit h = cast_ray(pos, dir, 0.0, obstacles);
    if (h.id >= 0 && h.range <= range) out.points.push_back({pos + dir * h.range, h.id});
  }
  if (out.nearest.id >= 0 && out.nearest.distance <= range)
    out.points.push_back({out.nearest.point, out.nearest.id});
  return out;
}

int bearing_bin(double angle) {
  const double a = wrap_angle(angle);
  int bin = static_cast<int>(std::floor((a + kPi) / (kPi / 12.0)));
  return std::clamp(bin, 0, 23);
}

namespace {

constexpr StateId kInitialKind = 1;
constexpr StateId kExitKind = 2;

StateId encode(StateId kind, int obstacle, int bin) {
  return kind * 1000000 + static_cast<StateId>(obstacle + 1) * 100 + bin;
}

}  // namespace

ReactiveNavigator::ReactiveNavigator(ReactiveParams params, double v, double u_M, double dt, Point2 target)
    : params_(params), v_(v), u_M_(u_M), dt_(dt), target_(target) {
  params_.validate();
}

ReactiveNavigator::Aim ReactiveNavigator::compute_aim(const UnicycleState& s, std::span<const SensedPoint> pts,
                                                      State& st) const {
  const Point2 pos{s.x, s.y};
  const Point2 to_t = target_ - pos;
  const double L = norm(to_t);
  Aim aim;
  aim.bearing = std::atan2(to_t.y, to_t.x);
  if (L == 0.0) return aim;
  const Point2 g = to_t / L;
  const double c = params_.pass_clearance;
  double first = kInf;
  for (const SensedPoint& sp : pts) {
    const Point2 r = sp.p - pos;
    const double t = dot(r, g);
    if (t <= 0.0 || t > L + c) continue;
    if (std::abs(cross(g, r)) < c && t < first) {
      first = t;
      aim.blocker = sp.id;
    }
  }
  if (aim.blocker < 0) return aim;
  aim.target_clear = false;
  double left = -kInf, right = kInf;
  for (const SensedPoint& sp : pts) {
    if (sp.id != aim.blocker) continue;
    const Point2 r = sp.p - pos;
    const double rho = norm(r);
    const double half = rho > c ? std::asin(c / rho) : 0.5 * kPi;
    const double rel = wrap_angle(std::atan2(r.y, r.x) - aim.bearing);
    left = std::max(left, rel + half);
    right = std::min(right, rel - half);
  }
  auto it = st.side_memory.find(aim.blocker);
  int side;
  if (it != st.side_memory.end()) {
    side = it->second;
  } else {
    side = std::abs(left) <= std::abs(right) ? 1 : -1;
    st.side_memory[aim.blocker] = side;
  }
  aim.bearing = wrap_angle(aim.bearing + (side > 0 ? left : right));
  return aim;
}

bool ReactiveNavigator::approaching(const UnicycleState& s, std::span<const SensedPoint> pts, int id,
                                    double bearing, double d) const {
  const Point2 pos{s.x, s.y};
  const Point2 g{std::cos(bearing), std::sin(bearing)};
  double clearance = kInf;
  for (const SensedPoint& sp : pts) {
    if (sp.id != id) continue;
    const Point2 r = sp.p - pos;
    const double t = dot(r, g);
    if (t <= 0.0 || t > params_.sensor_range) continue;
    clearance = std::min(clearance, std::abs(cross(g, r)));
  }
  return clearance < std::min(params_.d_trig, d - 0.02);
}

ReactiveNavigator::Output ReactiveNavigator::step(const UnicycleState& s, const Sensing2D& sensing,
                                                  std::optional<ActionId> decision) {
  State w = st_;
  Output out;
  const Point2 pos{s.x, s.y};
  const double d = sensing.nearest.distance;
  const bool have_d = std::isfinite(d);
  double rate = 0.0;
  if (have_d && w.prev_d && std::isfinite(*w.prev_d)) rate = (d - *w.prev_d) / dt_;

  const Aim aim = compute_aim(s, sensing.points, w);
  BoundaryReading rd;
  rd.d_min = have_d ? d : 1e9;
  rd.d_min_rate = rate;
  const double to_target = std::atan2(target_.y - pos.y, target_.x - pos.x);
  const double align_tol = 0.5 * u_M_ * dt_ + 1e-9;

  switch (w.mode) {
    case NavMode::Initial: {
      if (w.initial_sign == 0) {
        const int toward = wrap_angle(to_target - s.theta) >= 0.0 ? 1 : -1;
        if (!decision) {
          out.needs_decision = true;
          out.request = {encode(kInitialKind, -1, bearing_bin(to_target - s.theta)), {0, 1}, "initial"};
          return out;
        }
        w.initial_sign = *decision == 0 ? toward : -toward;
        out.events.push_back(std::string("initial circle ") + (w.initial_sign > 0 ? "left" : "right"));
      }
      rd.initial_sign = w.initial_sign;
      rd.exit_tangent_available = std::abs(wrap_angle(aim.bearing - s.theta)) <= align_tol;
      const NavMode nm = transition(w.mode, rd, params_, QDecision::None);
      if (nm != w.mode) {
        out.events.push_back("R1->R2 tangent point reached");
        w.mode = nm;
      }
      break;
    }
    case NavMode::Pursuit: {
      if (have_d && transition(w.mode, rd, params_, QDecision::None) == NavMode::Follow &&
          approaching(s, sensing.points, sensing.nearest.id, aim.bearing, d)) {
        w.mode = NavMode::Follow;
        w.followed = sensing.nearest.id;
        const Point2 h{std::cos(s.theta), std::sin(s.theta)};
        w.follow_gamma = cross(h, sensing.nearest.point - pos) > 0.0 ? 1 : -1;
        w.side_memory[w.followed] = -w.follow_gamma;
        w.suppress_exit = false;
        w.lap_turn = 0.0;
        out.events.push_back("R2->R3 follow obstacle " + std::to_string(w.followed));
      }
      break;
    }
    case NavMode::Follow: {
      w.lap_turn += wrap_angle(s.theta - w.prev_theta);
      TangentEvent ev = detect_exit_tangent(NavMode::Follow, s, sensing.points, target_, w.followed, params_, 0.0);
      if (!ev.fired && std::abs(w.lap_turn) > 2.0 * kPi && !aim.target_clear) {
        const Point2 far = pos + Point2{std::cos(aim.bearing), std::sin(aim.bearing)} * params_.sensor_range;
        ev = detect_exit_tangent(NavMode::Follow, s, sensing.points, far, w.followed, params_, 0.0);
      }
      if (ev.fired && !w.suppress_exit) {
        if (!decision) {
          out.needs_decision = true;
          out.request = {encode(kExitKind, w.followed, bearing_bin(to_target - s.theta)), {0, 1}, "exit"};
          return out;
        }
        rd.exit_tangent_available = true;
        const QDecision q = *decision == 0 ? QDecision::Pursue : QDecision::Follow;
        if (transition(w.mode, rd, params_, q) == NavMode::Pursuit) {
          w.mode = NavMode::Pursuit;
          out.events.push_back("R3->R2 exit tangent, pursue");
        } else {
          w.suppress_exit = true;
          out.events.push_back("exit tangent, keep following");
        }
      } else if (!ev.fired) {
        w.suppress_exit = false;
      }
      break;
    }
  }

  ReactiveParams p = params_;
  switch (w.mode) {
    case NavMode::Initial:
      out.u = control(NavMode::Initial, rd, p, u_M_);
      break;
    case NavMode::Pursuit: {
      const Aim a2 = w.mode == st_.mode ? aim : compute_aim(s, sensing.points, w);
      rd.phi_tan = wrap_angle(a2.bearing - s.theta);
      p.gamma = 1;
      out.u = control(NavMode::Pursuit, rd, p, u_M_);
      break;
    }
    case NavMode::Follow:
      p.gamma = w.follow_gamma;
      out.u = control(NavMode::Follow, rd, p, u_M_);
      break;
  }
  w.prev_d = have_d ? std::optional<double>(d) : std::nullopt;
  w.prev_theta = s.theta;
  st_ = std::move(w);
  return out;
}

}  // namespace navkit
