#include "navkit/geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>
#include <utility>

namespace navkit {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double signed_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

Point2 closest_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  return distance(p, closest_on_segment(p, a, b));
}

bool on_segment(Point2 p, Point2 a, Point2 b, double eps) {
  return distance_to_segment(p, a, b) <= eps;
}

namespace {

// Signed distance of c from the line through a and b (positive on the left).
double side(Point2 a, Point2 b, Point2 c) {
  const double len = distance(a, b);
  if (len == 0.0) return distance(a, c);
  return cross(b - a, c - a) / len;
}

int sgn_eps(double v) {
  if (v > kGeomEps) return 1;
  if (v < -kGeomEps) return -1;
  return 0;
}

}  // namespace

bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = sgn_eps(side(a, b, c));
  const int o2 = sgn_eps(side(a, b, d));
  const int o3 = sgn_eps(side(c, d, a));
  const int o4 = sgn_eps(side(c, d, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d) {
  return segments_cross(a, b, c, d) || on_segment(a, c, d) || on_segment(b, c, d) ||
         on_segment(c, a, b) || on_segment(d, a, b);
}

bool ring_is_simple(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    if (distance(a, b) <= kGeomEps) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = ring[j];
      const Point2 d = ring[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex only; reject folding back along the same line.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 other_first = (j == i + 1) ? a : b;
        const Point2 other_second = (j == i + 1) ? d : c;
        if (on_segment(other_second, shared, other_first) && distance(other_second, shared) > kGeomEps)
          return false;
        if (on_segment(other_first, shared, other_second) && distance(other_first, shared) > kGeomEps)
          return false;
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_ring(Point2 p, const Ring& ring) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, ring[i], ring[(i + 1) % n])) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

PolygonWithHoles PolygonWithHoles::make(Ring outer, std::vector<Ring> holes) {
  auto check_ring = [](Ring& r, bool ccw, const char* what) {
    if (r.size() < 3) throw GeometryError(std::string("degenerate ring (< 3 vertices): ") + what);
    for (const Point2& p : r)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw GeometryError(std::string("non-finite coordinate in ") + what);
    if (!ring_is_simple(r)) throw GeometryError(std::string("ring is not simple: ") + what);
    const double a = signed_area(r);
    if (std::abs(a) <= kGeomEps) throw GeometryError(std::string("zero-area ring: ") + what);
    if ((a > 0) != ccw) std::reverse(r.begin(), r.end());
  };
  check_ring(outer, true, "outer");
  for (Ring& h : holes) check_ring(h, false, "hole");

  auto rings_touch = [](const Ring& r1, const Ring& r2) {
    for (std::size_t i = 0; i < r1.size(); ++i)
      for (std::size_t j = 0; j < r2.size(); ++j)
        if (segments_touch(r1[i], r1[(i + 1) % r1.size()], r2[j], r2[(j + 1) % r2.size()]))
          return true;
    return false;
  };
  for (std::size_t h = 0; h < holes.size(); ++h) {
    if (rings_touch(outer, holes[h])) throw GeometryError("hole touches the outer ring");
    if (!point_in_ring(holes[h][0], outer)) throw GeometryError("hole lies outside the outer ring");
    for (std::size_t g = 0; g < h; ++g) {
      if (rings_touch(holes[g], holes[h]) || point_in_ring(holes[g][0], holes[h]) ||
          point_in_ring(holes[h][0], holes[g]))
        throw GeometryError("holes overlap");
    }
  }
  return PolygonWithHoles{std::move(outer), std::move(holes)};
}

double PolygonWithHoles::area() const {
  double a = signed_area(outer);
  for (const Ring& h : holes) a += signed_area(h);
  return a;
}

std::size_t PolygonWithHoles::vertex_count() const {
  std::size_t n = outer.size();
  for (const Ring& h : holes) n += h.size();
  return n;
}

bool point_in_region(Point2 p, const PolygonWithHoles& poly) {
  if (!point_in_ring(p, poly.outer)) return false;
  for (const Ring& h : poly.holes) {
    const std::size_t n = h.size();
    bool on_boundary = false;
    for (std::size_t i = 0; i < n && !on_boundary; ++i) on_boundary = on_segment(p, h[i], h[(i + 1) % n]);
    if (!on_boundary && point_in_ring(p, h)) return false;
  }
  return true;
}

double distance_to_boundary(Point2 p, const PolygonWithHoles& poly) {
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      best = std::min(best, distance_to_segment(p, r[i], r[(i + 1) % r.size()]));
  };
  scan(poly.outer);
  for (const Ring& h : poly.holes) scan(h);
  return best;
}

namespace {

// Whether q lies strictly inside the interior wedge at v for a ring that keeps
// its region on the left of a -> v -> b.
bool in_wedge(Point2 a, Point2 v, Point2 b, Point2 q) {
  const double turn = cross(v - a, b - v);
  const bool l1 = cross(v - a, q - v) > 0.0;
  const bool l2 = cross(b - v, q - v) > 0.0;
  if (turn > 0.0) return l1 && l2;
  return l1 || l2;
}

bool segment_clear(Point2 p, Point2 q, const Ring& ring, const std::vector<Ring>& holes) {
  auto blocked_by = [&](const Ring& r) {
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = r[i];
      const Point2 b = r[(i + 1) % n];
      if (segments_cross(p, q, a, b)) return true;
      if (!(a == p) && !(a == q) && on_segment(a, p, q)) return true;
    }
    return false;
  };
  if (blocked_by(ring)) return false;
  for (const Ring& h : holes)
    if (blocked_by(h)) return false;
  return true;
}

}  // namespace

Ring bridge_holes(const PolygonWithHoles& poly) {
  for (const Ring& r : poly.holes)
    if (r.size() < 3) throw GeometryError("degenerate ring (< 3 vertices)");
  if (poly.outer.size() < 3) throw GeometryError("degenerate ring (< 3 vertices)");

  Ring ring = poly.outer;
  std::vector<Ring> pending = poly.holes;
  while (!pending.empty()) {
    struct Candidate {
      double d;
      std::size_t hole, hv, rv;
    };
    std::vector<Candidate> cands;
    for (std::size_t h = 0; h < pending.size(); ++h)
      for (std::size_t j = 0; j < pending[h].size(); ++j)
        for (std::size_t k = 0; k < ring.size(); ++k)
          cands.push_back({distance(pending[h][j], ring[k]), h, j, k});
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.d, a.hole, a.hv, a.rv) < std::tie(b.d, b.hole, b.hv, b.rv);
    });

    bool done = false;
    for (const Candidate& c : cands) {
      const Ring& hole = pending[c.hole];
      const std::size_t hn = hole.size();
      const std::size_t rn = ring.size();
      const Point2 r = ring[c.rv];
      const Point2 h = hole[c.hv];
      if (!in_wedge(ring[(c.rv + rn - 1) % rn], r, ring[(c.rv + 1) % rn], h)) continue;
      if (!in_wedge(hole[(c.hv + hn - 1) % hn], h, hole[(c.hv + 1) % hn], r)) continue;
      if (!segment_clear(r, h, ring, pending)) continue;

      Ring next;
      next.reserve(rn + hn + 2);
      next.insert(next.end(), ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(c.rv) + 1);
      for (std::size_t t = 0; t <= hn; ++t) next.push_back(hole[(c.hv + t) % hn]);
      next.push_back(r);
      next.insert(next.end(), ring.begin() + static_cast<std::ptrdiff_t>(c.rv) + 1, ring.end());
      ring = std::move(next);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(c.hole));
      done = true;
      break;
    }
    if (!done) throw GeometryError("bridge_holes: no crossing-free bridge diagonal exists");
  }
  return ring;
}

double TriangulationMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    const Point2 p[3] = {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
    a += 0.5 * cross(p[1] - p[0], p[2] - p[0]);
  }
  return a;
}

namespace {

bool in_closed_triangle(Point2 q, Point2 a, Point2 b, Point2 c) {
  return side(a, b, q) >= -kGeomEps && side(b, c, q) >= -kGeomEps && side(c, a, q) >= -kGeomEps;
}

}  // namespace

TriangulationMesh triangulate(const Ring& ring) {
  const std::size_t m = ring.size();
  if (m < 3) throw GeometryError("triangulate: fewer than 3 vertices");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(ring[i], ring[(i + 1) % m], ring[j], ring[(j + 1) % m]))
        throw GeometryError("triangulate: self-intersecting input");
    }

  TriangulationMesh mesh;
  mesh.vertices = ring;
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (signed_area(ring) < 0.0) std::reverse(idx.begin(), idx.end());

  auto is_ear = [&](std::size_t pos) {
    const std::size_t n = idx.size();
    const std::size_t ip = idx[(pos + n - 1) % n];
    const std::size_t ic = idx[pos];
    const std::size_t in = idx[(pos + 1) % n];
    const Point2 a = ring[ip], b = ring[ic], c = ring[in];
    if (side(a, b, c) <= kGeomEps || side(b, c, a) <= kGeomEps) return false;  // reflex or flat
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t iq = idx[k];
      if (iq == ip || iq == ic || iq == in) continue;
      const Point2 q = ring[iq];
      if (q == a || q == b || q == c) continue;
      if (in_closed_triangle(q, a, b, c)) return false;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Point2 e0 = ring[idx[k]];
      const Point2 e1 = ring[idx[(k + 1) % n]];
      if (segments_cross(a, c, e0, e1)) return false;
    }
    // Duplicated bridge vertices can make a locally convex corner open onto
    // the wrong side of a bridge; the centroid settles it.
    Ring current(n);
    for (std::size_t k = 0; k < n; ++k) current[k] = ring[idx[k]];
    const Point2 g = (a + b + c) / 3.0;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 u = current[i], w = current[j];
      if ((u.y > g.y) != (w.y > g.y)) {
        const double x = u.x + (g.y - u.y) * (w.x - u.x) / (w.y - u.y);
        if (g.x < x) inside = !inside;
      }
    }
    return inside;
  };

  std::size_t cursor = 0;
  while (idx.size() > 3) {
    const std::size_t n = idx.size();
    bool clipped = false;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t pos = (cursor + step) % n;
      if (!is_ear(pos)) continue;
      mesh.triangles.push_back({idx[(pos + n - 1) % n], idx[pos], idx[(pos + 1) % n]});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(pos));
      cursor = pos % idx.size();
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("triangulate: no ear exists");
  }
  mesh.triangles.push_back({idx[0], idx[1], idx[2]});
  return mesh;
}

ColoringResult three_color(TriangulationMesh mesh) {
  const std::size_t t = mesh.triangles.size();
  if (t == 0) throw GeometryError("three_color: empty mesh");
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edge_tris;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& tri = mesh.triangles[i];
    for (int e = 0; e < 3; ++e) {
      std::size_t a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_tris[{a, b}].push_back(i);
    }
  }
  std::vector<std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>>> adj(t);
  std::size_t links = 0;
  for (const auto& [edge, tris] : edge_tris) {
    if (tris.size() > 2) throw GeometryError("three_color: edge shared by more than two triangles");
    if (tris.size() == 2) {
      adj[tris[0]].push_back({tris[1], edge});
      adj[tris[1]].push_back({tris[0], edge});
      ++links;
    }
  }
  if (links != t - 1) throw GeometryError("three_color: dual graph is not a tree");

  mesh.colors.assign(mesh.vertices.size(), -1);
  const auto& t0 = mesh.triangles[0];
  for (int k = 0; k < 3; ++k) mesh.colors[t0[k]] = k;
  std::vector<bool> seen(t, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t visited = 0;
  while (!q.empty()) {
    const std::size_t cur = q.front();
    q.pop();
    ++visited;
    for (const auto& [nb, edge] : adj[cur]) {
      if (seen[nb]) continue;
      seen[nb] = true;
      const auto& tri = mesh.triangles[nb];
      for (std::size_t v : tri) {
        if (v == edge.first || v == edge.second) continue;
        const int c = 3 - mesh.colors[edge.first] - mesh.colors[edge.second];
        if (mesh.colors[v] != -1 && mesh.colors[v] != c)
          throw GeometryError("three_color: inconsistent coloring");
        mesh.colors[v] = c;
      }
      q.push(nb);
    }
  }
  if (visited != t) throw GeometryError("three_color: dual graph is not a tree");

  ColoringResult out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (mesh.colors[v] >= 0) ++out.class_sizes[static_cast<std::size_t>(mesh.colors[v])];
  out.smallest_color = 0;
  for (int c = 1; c < 3; ++c)
    if (out.class_sizes[c] < out.class_sizes[out.smallest_color]) out.smallest_color = c;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (mesh.colors[v] == out.smallest_color) out.smallest_class.push_back(v);
  out.mesh = std::move(mesh);
  return out;
}

std::vector<std::size_t> convex_hull_indices(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(pts[a].x, pts[a].y, a) < std::tie(pts[b].x, pts[b].y, b);
  });
  if (n < 3) return order;
  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return cross(pts[a] - pts[o], pts[b] - pts[o]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], order[i]) <= kGeomEps) --k;
    hull[k++] = order[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], order[i]) <= kGeomEps) --k;
    hull[k++] = order[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::vector<Point2> out;
  for (std::size_t i : convex_hull_indices(pts)) out.push_back(pts[i]);
  return out;
}

}  // namespace navkit
