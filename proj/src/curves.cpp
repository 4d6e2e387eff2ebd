#include "navkit/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace navkit {

double bernstein(int i, int n, double t) {
  if (n < 0 || i < 0 || i > n) throw std::invalid_argument("bernstein: index out of range");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("bernstein: t outside [0,1]");
  double binom = 1.0;
  for (int k = 1; k <= i; ++k) binom = binom * (n - i + k) / k;
  return binom * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

Point3 CubicBezier::eval(double t) const { return bezier_eval(*this, t); }

Point3 CubicBezier::derivative(double t) const {
  const double s = 1.0 - t;
  return 3.0 * (s * s * (p[1] - p[0]) + 2.0 * s * t * (p[2] - p[1]) + t * t * (p[3] - p[2]));
}

Point3 CubicBezier::second_derivative(double t) const {
  return 6.0 * ((1.0 - t) * (p[2] - 2.0 * p[1] + p[0]) + t * (p[3] - 2.0 * p[2] + p[1]));
}

double CubicBezier::curvature(double t) const {
  const Point3 d1 = derivative(t);
  const double speed = norm(d1);
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return norm(cross(d1, second_derivative(t))) / (speed * speed * speed);
}

Point3 bezier_eval(const CubicBezier& curve, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("bezier_eval: t outside [0,1]");
  const double s = 1.0 - t;
  const double b0 = s * s * s, b1 = 3.0 * s * s * t, b2 = 3.0 * s * t * t, b3 = t * t * t;
  return curve.p[0] * b0 + curve.p[1] * b1 + curve.p[2] * b2 + curve.p[3] * b3;
}

std::string_view to_string(DubinsWord w) {
  switch (w) {
    case DubinsWord::LSL: return "LSL";
    case DubinsWord::LSR: return "LSR";
    case DubinsWord::RSL: return "RSL";
    case DubinsWord::RSR: return "RSR";
    case DubinsWord::RLR: return "RLR";
    case DubinsWord::LRL: return "LRL";
  }
  return "?";
}

namespace {

constexpr std::array<std::array<int, 3>, 6> kWordTurns = {{
    {1, 0, 1},    // LSL
    {1, 0, -1},   // LSR
    {-1, 0, 1},   // RSL
    {-1, 0, -1},  // RSR
    {-1, 1, -1},  // RLR
    {1, -1, 1},   // LRL
}};

double mod2pi(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r;
}

// Normalized-unit solutions (radius 1) for each word; nullopt when infeasible.
std::optional<std::array<double, 3>> solve_word(DubinsWord w, double a, double b, double d) {
  const double sa = std::sin(a), sb = std::sin(b), ca = std::cos(a), cb = std::cos(b);
  const double cab = std::cos(a - b);
  switch (w) {
    case DubinsWord::LSL: {
      const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
      if (p2 < 0.0) return std::nullopt;
      const double tmp = std::atan2(cb - ca, d + sa - sb);
      return std::array<double, 3>{mod2pi(tmp - a), std::sqrt(p2), mod2pi(b - tmp)};
    }
    case DubinsWord::RSR: {
      const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
      if (p2 < 0.0) return std::nullopt;
      const double tmp = std::atan2(ca - cb, d - sa + sb);
      return std::array<double, 3>{mod2pi(a - tmp), std::sqrt(p2), mod2pi(tmp - b)};
    }
    case DubinsWord::LSR: {
      const double p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
      if (p2 < 0.0) return std::nullopt;
      const double p = std::sqrt(p2);
      const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
      return std::array<double, 3>{mod2pi(tmp - a), p, mod2pi(tmp - mod2pi(b))};
    }
    case DubinsWord::RSL: {
      const double p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb);
      if (p2 < 0.0) return std::nullopt;
      const double p = std::sqrt(p2);
      const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
      return std::array<double, 3>{mod2pi(a - tmp), p, mod2pi(b - tmp)};
    }
    case DubinsWord::RLR: {
      const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
      if (std::abs(c) > 1.0) return std::nullopt;
      const double phi = std::atan2(ca - cb, d - sa + sb);
      const double p = mod2pi(2.0 * kPi - std::acos(c));
      const double t = mod2pi(a - phi + mod2pi(p / 2.0));
      return std::array<double, 3>{t, p, mod2pi(a - b - t + mod2pi(p))};
    }
    case DubinsWord::LRL: {
      const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
      if (std::abs(c) > 1.0) return std::nullopt;
      const double phi = std::atan2(ca - cb, d + sa - sb);
      const double p = mod2pi(2.0 * kPi - std::acos(c));
      const double t = mod2pi(-a - phi + p / 2.0);
      return std::array<double, 3>{t, p, mod2pi(mod2pi(b) - a - t + mod2pi(p))};
    }
  }
  return std::nullopt;
}

}  // namespace

bool DubinsPath::is_turn(int k) const { return turn_sign(k) != 0; }

int DubinsPath::turn_sign(int k) const { return kWordTurns[static_cast<std::size_t>(word)][k]; }

double DubinsPath::segment_length(int k) const {
  return is_turn(k) ? params[k] * radius : params[k];
}

double DubinsPath::length() const {
  return segment_length(0) + segment_length(1) + segment_length(2);
}

Pose2 DubinsPath::sample(double s) const {
  Pose2 q = start;
  double remaining = std::max(0.0, s);
  for (int k = 0; k < 3 && remaining > 0.0; ++k) {
    const double seg = std::min(remaining, segment_length(k));
    remaining -= seg;
    const int sigma = turn_sign(k);
    if (sigma == 0) {
      q.x += seg * std::cos(q.theta);
      q.y += seg * std::sin(q.theta);
    } else {
      const double th1 = q.theta + sigma * seg / radius;
      q.x += sigma * radius * (std::sin(th1) - std::sin(q.theta));
      q.y -= sigma * radius * (std::cos(th1) - std::cos(q.theta));
      q.theta = th1;
    }
  }
  q.theta = wrap_angle(q.theta);
  return q;
}

std::vector<DubinsPath> dubins_candidates(Pose2 start, Pose2 goal, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("dubins: radius must be positive");
  const double dx = goal.x - start.x, dy = goal.y - start.y;
  const double d = std::hypot(dx, dy) / radius;
  const double th = d > 0.0 ? mod2pi(std::atan2(dy, dx)) : 0.0;
  const double a = mod2pi(start.theta - th);
  const double b = mod2pi(goal.theta - th);
  std::vector<DubinsPath> out;
  for (int w = 0; w < 6; ++w) {
    const auto word = static_cast<DubinsWord>(w);
    auto sol = solve_word(word, a, b, d);
    if (!sol) continue;
    DubinsPath path;
    path.start = start;
    path.radius = radius;
    path.word = word;
    path.params = *sol;
    if (!path.is_turn(1)) path.params[1] *= radius;
    out.push_back(path);
  }
  return out;
}

DubinsPath dubins_shortest(Pose2 start, Pose2 goal, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("dubins: radius must be positive");
  const bool same_position = std::hypot(goal.x - start.x, goal.y - start.y) <= 1e-6;
  if (same_position && std::abs(wrap_angle(goal.theta - start.theta)) <= 1e-6) {
    DubinsPath path;
    path.start = start;
    path.radius = radius;
    path.degenerate = true;
    return path;
  }
  const auto cands = dubins_candidates(start, goal, radius);
  const DubinsPath* best = nullptr;
  for (const DubinsPath& c : cands)
    if (!best || c.length() < best->length() - 1e-10) best = &c;
  if (!best) throw std::logic_error("dubins: no feasible word");
  return *best;
}

Vec3 direction_from_angles(double theta, double psi) {
  return {std::cos(theta) * std::cos(psi), std::sin(theta) * std::cos(psi), std::sin(psi)};
}

double CompositeTrajectory::length(int samples_per_piece) const {
  double len = 0.0;
  for (const CubicBezier& c : pieces) {
    Point3 prev = c.p[0];
    for (int k = 1; k <= samples_per_piece; ++k) {
      const Point3 cur = c.eval(static_cast<double>(k) / samples_per_piece);
      len += distance(prev, cur);
      prev = cur;
    }
  }
  return len;
}

CompositeTrajectory stitch_smooth(std::vector<Joint> joints, std::vector<TangentLengths> tangents,
                                  bool closed) {
  if (joints.size() < 2) throw std::invalid_argument("stitch_smooth: need at least 2 waypoints");
  if (!closed && joints.size() > 2 && distance(joints.front().position, joints.back().position) == 0.0) {
    joints.back().theta = joints.front().theta;
    joints.back().psi = joints.front().psi;
    joints.pop_back();
    closed = true;
  }
  const std::size_t n = joints.size();
  const std::size_t pieces = closed ? n : n - 1;
  if (tangents.size() != pieces)
    throw std::invalid_argument("stitch_smooth: one tangent-length pair per piece required");
  for (std::size_t i = 0; i < pieces; ++i) {
    if (tangents[i].la < 0.0 || tangents[i].lb < 0.0 || !std::isfinite(tangents[i].la) ||
        !std::isfinite(tangents[i].lb))
      throw std::invalid_argument("stitch_smooth: tangent lengths must be finite and non-negative");
    const bool start_interior = closed || i > 0;
    const bool end_interior = closed || i + 1 < pieces;
    if ((start_interior && tangents[i].la == 0.0) || (end_interior && tangents[i].lb == 0.0))
      throw std::invalid_argument("stitch_smooth: zero-length tangent at an interior joint");
  }
  CompositeTrajectory traj;
  traj.closed = closed;
  traj.joints = joints;
  traj.tangents = tangents;
  for (std::size_t i = 0; i < pieces; ++i) {
    const Joint& a = joints[i];
    const Joint& b = joints[(i + 1) % n];
    CubicBezier c;
    c.p[0] = a.position;
    c.p[1] = a.position + tangents[i].la * direction_from_angles(a.theta, a.psi);
    c.p[2] = b.position - tangents[i].lb * direction_from_angles(b.theta, b.psi);
    c.p[3] = b.position;
    traj.pieces.push_back(c);
  }
  return traj;
}

SmoothnessResidual smoothness_residual(const CompositeTrajectory& traj) {
  SmoothnessResidual r;
  const std::size_t m = traj.pieces.size();
  const std::size_t joins = traj.closed ? m : (m == 0 ? 0 : m - 1);
  for (std::size_t k = 0; k < joins; ++k) {
    const CubicBezier& pi = traj.pieces[k];
    const CubicBezier& pj = traj.pieces[(k + 1) % m];
    r.position = std::max(r.position, distance(pi.p[3], pj.p[0]));
    const Vec3 tb = pi.p[3] - pi.p[2];
    const Vec3 ta = pj.p[1] - pj.p[0];
    const double lb = norm(tb), la = norm(ta);
    r.proportional = std::max(r.proportional, norm(la * tb - lb * ta));
  }
  return r;
}

}  // namespace navkit
