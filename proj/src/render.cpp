#include "navkit/render.hpp"

#include <algorithm>
#include <sstream>

#include "navkit/textio.hpp"

namespace navkit {

namespace {

struct Frame {
  Point2 lo;
  double scale = 1.0;
  double ox = 0.0;
  double oy = 0.0;

  double px(double wx) const { return ox + (wx - lo.x) * scale; }
  double py(double wy) const { return kSvgSize - (oy + (wy - lo.y) * scale); }
  std::string x(double wx) const { return fixed(px(wx), 2); }
  std::string y(double wy) const { return fixed(py(wy), 2); }
  std::string pt(Point2 p) const { return x(p.x) + "," + y(p.y); }
  std::string len(double l) const { return fixed(l * scale, 2); }
};

Frame frame_for(const SvgScene& sc) {
  Point2 lo{kInf, kInf}, hi{-kInf, -kInf};
  auto grow = [&](Point2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  if (sc.bounds) {
    grow(sc.bounds->first);
    grow(sc.bounds->second);
  } else {
    for (const Point2& p : sc.region.outer) grow(p);
    for (const Obstacle2D& o : sc.obstacles) {
      if (o.is_disc) {
        grow(o.center - Point2{o.radius, o.radius});
        grow(o.center + Point2{o.radius, o.radius});
      } else {
        for (const Point2& p : o.ring) grow(p);
      }
    }
    for (const Sphere& s : sc.spheres) {
      grow(xy(s.center) - Point2{s.radius, s.radius});
      grow(xy(s.center) + Point2{s.radius, s.radius});
    }
    for (const Ring& r : sc.footprints)
      for (const Point2& p : r) grow(p);
    for (const auto& path : sc.paths)
      for (const Point2& p : path) grow(p);
    for (const Point2& p : sc.waypoints) grow(p);
    if (sc.start) grow(*sc.start);
    if (sc.target) grow(*sc.target);
  }
  if (!(lo.x <= hi.x)) {
    lo = {0.0, 0.0};
    hi = {1.0, 1.0};
  }
  const double w = std::max(hi.x - lo.x, 1e-9), h = std::max(hi.y - lo.y, 1e-9);
  const double inner = kSvgSize * (1.0 - 2.0 * kSvgMargin);
  Frame f;
  f.lo = lo;
  f.scale = inner / std::max(w, h);
  f.ox = kSvgSize * kSvgMargin + 0.5 * (inner - w * f.scale);
  f.oy = kSvgSize * kSvgMargin + 0.5 * (inner - h * f.scale);
  return f;
}

std::string points_attr(const Frame& f, const Ring& r) {
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? " " : "") + f.pt(r[i]);
  return s;
}

}  // namespace

std::string render_svg(const SvgScene& sc) {
  const Frame f = frame_for(sc);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  if (sc.bounds) {
    const Point2 a = sc.bounds->first, b = sc.bounds->second;
    os << "<rect class=\"arena\" x=\"" << f.x(a.x) << "\" y=\"" << f.y(b.y) << "\" width=\"" << f.len(b.x - a.x)
       << "\" height=\"" << f.len(b.y - a.y) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  if (!sc.region.outer.empty()) {
    os << "<polygon class=\"region\" points=\"" << points_attr(f, sc.region.outer)
       << "\" fill=\"#eef5ee\" stroke=\"#4a7\" stroke-width=\"1.5\"/>\n";
    for (const Ring& h : sc.region.holes)
      os << "<polygon class=\"hole\" points=\"" << points_attr(f, h) << "\" fill=\"white\" stroke=\"#4a7\"/>\n";
  }
  for (const Ring& r : sc.footprints)
    os << "<polygon class=\"obstacle\" points=\"" << points_attr(f, r) << "\" fill=\"#999\" stroke=\"#444\"/>\n";
  for (const Obstacle2D& o : sc.obstacles) {
    if (o.is_disc)
      os << "<circle class=\"obstacle\" cx=\"" << f.x(o.center.x) << "\" cy=\"" << f.y(o.center.y) << "\" r=\""
         << f.len(o.radius) << "\" fill=\"#999\" stroke=\"#444\"/>\n";
    else
      os << "<polygon class=\"obstacle\" points=\"" << points_attr(f, o.ring) << "\" fill=\"#999\" stroke=\"#444\"/>\n";
  }
  for (const Sphere& s : sc.spheres)
    os << "<circle class=\"obstacle\" cx=\"" << f.x(s.center.x) << "\" cy=\"" << f.y(s.center.y) << "\" r=\""
       << f.len(s.radius) << "\" fill=\"#bbb\" stroke=\"#444\"/>\n";
  for (const auto& path : sc.paths) {
    if (path.empty()) continue;
    os << "<path class=\"path\" d=\"";
    for (std::size_t i = 0; i < path.size(); ++i) os << (i ? " L " : "M ") << f.pt(path[i]);
    os << "\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>\n";
  }
  for (const Point2& p : sc.waypoints)
    os << "<circle class=\"waypoint\" cx=\"" << f.x(p.x) << "\" cy=\"" << f.y(p.y)
       << "\" r=\"4\" fill=\"#26c\"/>\n";
  if (sc.start)
    os << "<rect class=\"start\" x=\"" << fixed(f.px(sc.start->x) - 6.0, 2) << "\" y=\""
       << fixed(f.py(sc.start->y) - 6.0, 2) << "\" width=\"12\" height=\"12\" fill=\"#2a2\"/>\n";
  if (sc.target)
    os << "<circle class=\"target\" cx=\"" << f.x(sc.target->x) << "\" cy=\"" << f.y(sc.target->y)
       << "\" r=\"8\" fill=\"none\" stroke=\"#e80\" stroke-width=\"3\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace navkit
