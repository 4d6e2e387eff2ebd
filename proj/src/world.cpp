#include "navkit/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace navkit {

Obstacle2D Obstacle2D::disc(int id, Point2 c, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("disc radius must be positive");
  Obstacle2D o;
  o.id = id;
  o.is_disc = true;
  o.center = c;
  o.radius = r;
  return o;
}

Obstacle2D Obstacle2D::polygon(int id, Ring ring) {
  if (ring.size() < 3) throw std::invalid_argument("polygon obstacle needs 3 vertices");
  if (!ring_is_simple(ring)) throw std::invalid_argument("polygon obstacle is not simple");
  if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  Obstacle2D o;
  o.id = id;
  o.is_disc = false;
  Point2 c{};
  for (const Point2& p : ring) c = c + p;
  o.center = c / static_cast<double>(ring.size());
  for (const Point2& p : ring) o.radius = std::max(o.radius, navkit::distance(p, o.center));
  o.ring = std::move(ring);
  return o;
}

bool Obstacle2D::contains(Point2 p) const {
  if (is_disc) return navkit::distance(p, center) <= radius;
  return point_in_ring(p, ring);
}

double Obstacle2D::distance(Point2 p) const {
  if (is_disc) return std::max(0.0, navkit::distance(p, center) - radius);
  if (point_in_ring(p, ring)) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < ring.size(); ++i)
    best = std::min(best, distance_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
  return best;
}

Point2 Obstacle2D::nearest_point(Point2 p) const {
  if (is_disc) {
    const Point2 d = p - center;
    const double len = norm(d);
    if (len == 0.0) return center + Point2{radius, 0.0};
    return center + d * (radius / len);
  }
  double best = kInf;
  Point2 out = ring[0];
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 q = closest_on_segment(p, ring[i], ring[(i + 1) % ring.size()]);
    const double d = navkit::distance(p, q);
    if (d < best) {
      best = d;
      out = q;
    }
  }
  return out;
}

namespace {

std::optional<double> ray_circle(Point2 o, Point2 d, Point2 c, double r) {
  const Point2 oc = o - c;
  const double b = dot(d, oc);
  const double cc = dot(oc, oc) - r * r;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return std::nullopt;
  const double s = -b - std::sqrt(disc);
  if (s < 0.0) return std::nullopt;
  return s;
}

std::optional<double> ray_segment(Point2 o, Point2 d, Point2 a, Point2 b) {
  const Point2 e = b - a;
  const double denom = cross(d, e);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const Point2 ao = a - o;
  const double s = cross(ao, e) / denom;
  const double t = cross(ao, d) / denom;
  if (s < 0.0 || t < 0.0 || t > 1.0) return std::nullopt;
  return s;
}

void keep_min(std::optional<double>& best, std::optional<double> cand) {
  if (cand && (!best || *cand < *best)) best = cand;
}

}  // namespace

std::optional<double> Obstacle2D::ray_hit(Point2 o, Point2 dir, double inflate) const {
  if (is_disc) return ray_circle(o, dir, center, radius + inflate);
  if (distance(o) <= inflate) return 0.0;
  std::optional<double> best;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    if (inflate <= 0.0) {
      keep_min(best, ray_segment(o, dir, a, b));
      continue;
    }
    keep_min(best, ray_circle(o, dir, a, inflate));
    const Point2 e = b - a;
    const double len = norm(e);
    if (len == 0.0) continue;
    const Point2 nrm{-e.y / len * inflate, e.x / len * inflate};
    keep_min(best, ray_segment(o, dir, a + nrm, b + nrm));
    keep_min(best, ray_segment(o, dir, a - nrm, b - nrm));
  }
  return best;
}

Obstacle2D Obstacle2D::translated(Point2 d) const {
  Obstacle2D o = *this;
  o.center = o.center + d;
  for (Point2& p : o.ring) p = p + d;
  return o;
}

Point2 MovingObstacle::position(double t) const {
  if (path.empty()) return {};
  if (path.size() == 1 || speed <= 0.0) return path.front();
  std::vector<Point2> pts = path;
  if (loop) pts.push_back(path.front());
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) cum.push_back(cum.back() + distance(pts[i - 1], pts[i]));
  const double total = cum.back();
  if (total <= 0.0) return path.front();
  double s = speed * t;
  if (loop) {
    s = std::fmod(s, total);
  } else {
    s = std::fmod(s, 2.0 * total);
    if (s > total) s = 2.0 * total - s;
  }
  const auto it = std::upper_bound(cum.begin(), cum.end(), s);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), pts.size() - 1);
  const std::size_t i = k == 0 ? 0 : k - 1;
  const double seg = cum[i + 1] - cum[i];
  const double f = seg > 0.0 ? (s - cum[i]) / seg : 0.0;
  return pts[i] + (pts[i + 1] - pts[i]) * f;
}

Obstacle2D MovingObstacle::at(double t) const { return shape.translated(position(t)); }

std::vector<Obstacle2D> World2D::snapshot(double t) const {
  std::vector<Obstacle2D> out = statics;
  for (const MovingObstacle& m : movers) out.push_back(m.at(t));
  return out;
}

NearestObstacle nearest_obstacle(Point2 p, const std::vector<Obstacle2D>& obstacles) {
  NearestObstacle best;
  for (const Obstacle2D& o : obstacles) {
    const double d = o.distance(p);
    if (d < best.distance || (d == best.distance && o.id < best.id)) {
      best.distance = d;
      best.id = o.id;
      best.point = o.nearest_point(p);
    }
  }
  return best;
}

RayHit cast_ray(Point2 o, Point2 dir, double inflate, const std::vector<Obstacle2D>& obstacles) {
  RayHit best;
  for (const Obstacle2D& ob : obstacles) {
    auto h = ob.ray_hit(o, dir, inflate);
    if (h && *h < best.range) {
      best.range = *h;
      best.id = ob.id;
    }
  }
  return best;
}

}  // namespace navkit
