#include "navkit/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "navkit/rng.hpp"
#include "navkit/textio.hpp"

namespace navkit {

void CameraModel::validate() const {
  if (!(alpha > 0.0 && alpha < kPi)) throw std::invalid_argument("visibility angle must lie in (0, pi)");
}

double fov_radius(double z, double alpha, double z_g) {
  if (!(z > z_g)) throw std::invalid_argument("fov_radius: camera must be above the ground point");
  CameraModel{alpha}.validate();
  return (z - z_g) * std::tan(alpha / 2.0);
}

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  void add(Point2 p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
};

Box bounds(const Ring& r) {
  Box b;
  for (const Point2& p : r) b.add(p);
  return b;
}

bool rings_intersect(const Ring& a, const Ring& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (segments_touch(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
  return false;
}

/// Convex polygon vs region with holes.
bool hex_meets_region(const Ring& hex, const PolygonWithHoles& region) {
  if (rings_intersect(hex, region.outer)) return true;
  for (const Ring& h : region.holes)
    if (rings_intersect(hex, h)) return true;
  // No boundary contact: either nested or disjoint.
  if (point_in_region(hex[0], region)) return true;
  return point_in_ring(region.outer[0], hex);
}

}  // namespace

std::vector<Point2> triangular_lattice(const PolygonWithHoles& region, double R, const LatticePlacement& pl) {
  if (region.outer.size() < 3) throw std::invalid_argument("triangular_lattice: empty region");
  if (!(R > 0.0)) throw std::invalid_argument("triangular_lattice: R must be positive");
  if (!(pl.lambda >= 0.0 && pl.lambda < kPi / 3.0 + 1e-12))
    throw std::invalid_argument("triangular_lattice: lambda must lie in [0, pi/3)");
  const double side = std::sqrt(3.0) * R;
  const Point2 e1{side * std::cos(pl.lambda), side * std::sin(pl.lambda)};
  const Point2 e2{side * std::cos(pl.lambda + kPi / 3.0), side * std::sin(pl.lambda + kPi / 3.0)};
  const Point2 origin{pl.x0, pl.y0};
  const double det = cross(e1, e2);

  const Box box = bounds(region.outer);
  double i_lo = kBig, i_hi = -kBig, j_lo = kBig, j_hi = -kBig;
  for (Point2 corner : {Point2{box.x0, box.y0}, Point2{box.x1, box.y0}, Point2{box.x0, box.y1}, Point2{box.x1, box.y1}}) {
    const Point2 r = corner - origin;
    const double i = cross(r, e2) / det;
    const double j = cross(e1, r) / det;
    i_lo = std::min(i_lo, i);
    i_hi = std::max(i_hi, i);
    j_lo = std::min(j_lo, j);
    j_hi = std::max(j_hi, j);
  }
  std::vector<Point2> out;
  for (long i = static_cast<long>(std::floor(i_lo)) - 2; i <= static_cast<long>(std::ceil(i_hi)) + 2; ++i)
    for (long j = static_cast<long>(std::floor(j_lo)) - 2; j <= static_cast<long>(std::ceil(j_hi)) + 2; ++j) {
      const Point2 c = origin + e1 * static_cast<double>(i) + e2 * static_cast<double>(j);
      if (c.x < box.x0 - R || c.x > box.x1 + R || c.y < box.y0 - R || c.y > box.y1 + R) continue;
      Ring hex;
      for (int k = 0; k < 6; ++k) {
        const double a = pl.lambda + kPi / 6.0 + k * kPi / 3.0;
        hex.push_back(c + Point2{R * std::cos(a), R * std::sin(a)});
      }
      if (hex_meets_region(hex, region)) out.push_back(c);
    }
  return out;
}

WaypointSet lattice_waypoints(const PolygonWithHoles& region, double z, double alpha, const LatticePlacement& pl) {
  WaypointSet ws;
  for (const Point2& c : triangular_lattice(region, fov_radius(z, alpha), pl)) ws.points.push_back({c.x, c.y, z});
  return ws;
}

AltitudeSweep altitude_sweep(const PolygonWithHoles& region, double alpha, const SweepConfig& cfg) {
  if (!(cfg.z_min < cfg.z_max)) throw std::invalid_argument("altitude_sweep: need z_min < z_max");
  if (!(cfg.step > 0.0) || cfg.trials < 1) throw std::invalid_argument("altitude_sweep: bad step or trial count");
  const Box box = bounds(region.outer);
  std::vector<double> zs;
  for (double z = cfg.z_max; z >= cfg.z_min - 1e-9; z -= cfg.step) zs.push_back(z);
  const std::size_t nz = zs.size();
  const std::size_t total = nz * static_cast<std::size_t>(cfg.trials);
  std::vector<std::size_t> counts(total);
  std::vector<LatticePlacement> placements(total);

  auto run_trial = [&](std::size_t k) {
    const std::size_t zi = k / static_cast<std::size_t>(cfg.trials);
    Rng rng(Rng::derive(cfg.seed, k));
    const double R = fov_radius(zs[zi], alpha);
    LatticePlacement pl;
    pl.lambda = rng.uniform(0.0, kPi / 3.0);
    pl.x0 = rng.uniform(box.x0, box.x0 + std::sqrt(3.0) * R);
    pl.y0 = rng.uniform(box.y0, box.y0 + std::sqrt(3.0) * R);
    placements[k] = pl;
    counts[k] = triangular_lattice(region, R, pl).size();
  };
  if (cfg.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < static_cast<long>(total); ++k) run_trial(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < total; ++k) run_trial(k);
  }

  AltitudeSweep out;
  out.curve.resize(nz);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    SweepPoint& sp = out.curve[zi];
    sp.z = zs[zi];
    sp.source_z = zs[zi];
    sp.count = std::numeric_limits<std::size_t>::max();
    for (int t = 0; t < cfg.trials; ++t) {
      const std::size_t k = zi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t);
      if (counts[k] < sp.count) {
        sp.count = counts[k];
        sp.placement = placements[k];
      }
    }
  }
  // Running minimum from the lowest altitude upward.
  for (std::size_t zi = nz - 1; zi-- > 0;) {
    const SweepPoint& lower = out.curve[zi + 1];
    SweepPoint& sp = out.curve[zi];
    if (lower.count < sp.count) {
      sp.count = lower.count;
      sp.source_z = lower.source_z;
      sp.placement = lower.placement;
    }
  }
  std::size_t budget = cfg.budget.value_or(out.curve.front().count);
  for (const SweepPoint& sp : out.curve)
    if (sp.count <= budget) out.z_star = sp.z;
  if (out.z_star) {
    const auto it = std::find_if(out.curve.begin(), out.curve.end(),
                                 [&](const SweepPoint& sp) { return sp.z == *out.z_star; });
    for (const Point2& c : triangular_lattice(region, fov_radius(it->source_z, alpha), it->placement))
      out.waypoints.points.push_back({c.x, c.y, it->z});
  }
  return out;
}

CoverageReport grid_coverage(const PolygonWithHoles& region, const std::vector<Point2>& centers, double R,
                             double spacing, Exec exec) {
  if (!(spacing > 0.0)) throw std::invalid_argument("grid_coverage: spacing must be positive");
  const Box box = bounds(region.outer);
  const long nx = static_cast<long>(std::floor((box.x1 - box.x0) / spacing)) + 1;
  const long ny = static_cast<long>(std::floor((box.y1 - box.y0) / spacing)) + 1;
  std::vector<std::uint8_t> state(static_cast<std::size_t>(nx * ny), 0);  // 0 outside, 1 covered, 2 uncovered
  const double R2 = R * R * (1.0 + 1e-12);
  auto eval = [&](long k) {
    const Point2 p{box.x0 + (static_cast<double>(k % nx) + 0.5) * spacing,
                   box.y0 + (static_cast<double>(k / nx) + 0.5) * spacing};
    if (!point_in_region(p, region)) return;
    std::uint8_t s = 2;
    for (const Point2& c : centers) {
      const Point2 d = p - c;
      if (dot(d, d) <= R2) {
        s = 1;
        break;
      }
    }
    state[static_cast<std::size_t>(k)] = s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < nx * ny; ++k) eval(k);
  } else {
    for (long k = 0; k < nx * ny; ++k) eval(k);
  }
  CoverageReport rep;
  for (long k = 0; k < nx * ny; ++k) {
    const std::uint8_t s = state[static_cast<std::size_t>(k)];
    if (s == 0) continue;
    ++rep.samples;
    if (s == 2) {
      ++rep.uncovered;
      if (rep.uncovered_points.size() < 16)
        rep.uncovered_points.push_back({box.x0 + (static_cast<double>(k % nx) + 0.5) * spacing,
                                        box.y0 + (static_cast<double>(k / nx) + 0.5) * spacing});
    }
  }
  return rep;
}

PolygonWithHoles Terrain::free_ground() const {
  std::vector<Ring> holes = region.holes;
  for (const TerrainObstacle& o : obstacles) holes.push_back(o.bottom);
  return PolygonWithHoles::make(region.outer, holes);
}

void Terrain::validate() const {
  if (!(c >= 0.0)) throw std::invalid_argument("terrain: c must be non-negative");
  if (!(c2 > 0.0 && c1 > 0.0)) throw std::invalid_argument("terrain: c1 and c2 must be positive");
  if (!(c + c2 <= z_min + 1e-12)) throw std::invalid_argument("terrain: need c + c2 <= z_min");
  if (!(z_min < z_max)) throw std::invalid_argument("terrain: need z_min < z_max");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const TerrainObstacle& o = obstacles[i];
    const std::string tag = "terrain obstacle " + std::to_string(i);
    if (o.bottom.size() < 3 || o.top.size() != o.bottom.size())
      throw std::invalid_argument(tag + ": top and bottom need the same vertex count (>= 3)");
    if (!(o.height > c)) throw std::invalid_argument(tag + ": height must exceed c");
    if (!ring_is_simple(o.bottom) || !ring_is_simple(o.top)) throw std::invalid_argument(tag + ": face not simple");
    if ((signed_area(o.bottom) > 0.0) != (signed_area(o.top) > 0.0))
      throw std::invalid_argument(tag + ": top and bottom orientation differ");
    for (const Point2& p : o.top)
      if (!point_in_ring(p, o.bottom)) throw std::invalid_argument(tag + ": top face leaves the footprint");
  }
  free_ground();
}

namespace {

using Tri3 = std::array<Point3, 3>;

std::vector<Tri3> obstacle_faces(const TerrainObstacle& o) {
  std::vector<Tri3> faces;
  const std::size_t n = o.bottom.size();
  auto lift = [](Point2 p, double z) { return Point3{p.x, p.y, z}; };
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const Point3 a = lift(o.bottom[k], 0.0), b = lift(o.bottom[k1], 0.0);
    const Point3 c = lift(o.top[k1], o.height), d = lift(o.top[k], o.height);
    faces.push_back({a, b, c});
    faces.push_back({a, c, d});
  }
  for (const auto& ring_z : {std::pair{&o.top, o.height}, std::pair{&o.bottom, 0.0}}) {
    const TriangulationMesh m = triangulate(*ring_z.first);
    for (const auto& t : m.triangles)
      faces.push_back({lift(m.vertices[t[0]], ring_z.second), lift(m.vertices[t[1]], ring_z.second),
                       lift(m.vertices[t[2]], ring_z.second)});
  }
  return faces;
}

/// Segment parameter of a hit with the closed triangle, if any.
std::optional<double> segment_triangle(const Point3& p, const Point3& q, const Tri3& tri) {
  const Vec3 d = q - p;
  const Vec3 e1 = tri[1] - tri[0];
  const Vec3 e2 = tri[2] - tri[0];
  const Vec3 h = cross(d, e2);
  const double a = dot(e1, h);
  if (std::abs(a) < 1e-14) return std::nullopt;
  const double f = 1.0 / a;
  const Vec3 s = p - tri[0];
  const double u = f * dot(s, h);
  if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
  const Vec3 qv = cross(s, e1);
  const double v = f * dot(d, qv);
  if (v < -1e-12 || u + v > 1.0 + 1e-12) return std::nullopt;
  const double t = f * dot(e2, qv);
  if (t < 0.0 || t > 1.0) return std::nullopt;
  return t;
}

Point3 closest_on_triangle(const Point3& p, const Tri3& t) {
  const Point3 &a = t[0], &b = t[1], &c = t[2];
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

bool inside_obstacle(const Point3& p, const TerrainObstacle& o) {
  if (!(p.z > 0.0 && p.z < o.height)) return false;
  const double s = p.z / o.height;
  Ring section(o.bottom.size());
  for (std::size_t k = 0; k < section.size(); ++k) section[k] = o.bottom[k] + (o.top[k] - o.bottom[k]) * s;
  return point_in_ring(xy(p), section);
}

}  // namespace

double obstacle_distance(const Point3& p, const TerrainObstacle& o) {
  if (inside_obstacle(p, o)) return 0.0;
  double best = kBig;
  for (const Tri3& t : obstacle_faces(o)) best = std::min(best, distance(p, closest_on_triangle(p, t)));
  return best;
}

namespace {

bool sight_blocked(const Point3& wp, const Point3& g, const TerrainObstacle& o, const std::vector<Tri3>& faces) {
  if (std::min(wp.z, g.z) >= o.height) return false;
  for (const Tri3& t : faces) {
    const auto hit = segment_triangle(wp, g, t);
    if (!hit || *hit <= 1e-9 || *hit >= 1.0 - 1e-9) continue;
    // A face crossing blocks only when the segment enters the interior there.
    const Point3 before = wp + (g - wp) * (*hit - 1e-7);
    const Point3 after = wp + (g - wp) * (*hit + 1e-7);
    if (inside_obstacle(before, o) || inside_obstacle(after, o)) return true;
  }
  return false;
}

bool visible(const Point3& wp, const Point3& g, double alpha, const Terrain& terrain,
             const std::vector<std::vector<Tri3>>& faces) {
  if (!(wp.z > g.z)) return false;
  const double R = fov_radius(wp.z, alpha, g.z);
  if (distance(xy(wp), xy(g)) > R * (1.0 + 1e-12)) return false;
  for (std::size_t k = 0; k < terrain.obstacles.size(); ++k)
    if (sight_blocked(wp, g, terrain.obstacles[k], faces[k])) return false;
  return true;
}

std::vector<std::vector<Tri3>> all_faces(const Terrain& terrain) {
  std::vector<std::vector<Tri3>> faces;
  for (const TerrainObstacle& o : terrain.obstacles) faces.push_back(obstacle_faces(o));
  return faces;
}

}  // namespace

bool visibility_check(const Point3& wp, const Point3& g, double alpha, const Terrain& terrain) {
  return visible(wp, g, alpha, terrain, all_faces(terrain));
}

VantageResult vantage_waypoints_3d(const Terrain& terrain, double alpha) {
  terrain.validate();
  CameraModel{alpha}.validate();
  const double tan_half = std::tan(alpha / 2.0);
  const PolygonWithHoles ground = terrain.free_ground();
  const Ring bridged = bridge_holes(ground);
  const ColoringResult col = three_color(triangulate(bridged));
  const TriangulationMesh& mesh = col.mesh;

  VantageResult out;
  out.triangulation_vertices = bridged.size();
  out.bound = bridged.size() / 3;
  out.set.c1 = terrain.c1;
  out.set.c2 = terrain.c2;

  // Longest incident triangulation side per vertex position.
  auto key = [](Point2 p) { return std::pair{p.x, p.y}; };
  std::map<std::pair<double, double>, double> d_l;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const Point2 a = mesh.vertices[t[e]];
      const Point2 b = mesh.vertices[t[(e + 1) % 3]];
      const double len = distance(a, b);
      d_l[key(a)] = std::max(d_l[key(a)], len);
      d_l[key(b)] = std::max(d_l[key(b)], len);
    }

  std::vector<Point2> chosen;
  for (std::size_t idx : col.smallest_class) {
    const Point2 p = mesh.vertices[idx];
    if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
  }
  for (const Point2& p : chosen) {
    const double dl = d_l[key(p)];
    double b = -1.0, d_e = 0.0;
    for (const TerrainObstacle& o : terrain.obstacles) {
      bool vertex = std::find(o.bottom.begin(), o.bottom.end(), p) != o.bottom.end() ||
                    std::find(o.top.begin(), o.top.end(), p) != o.top.end();
      if (!vertex) continue;
      b = std::max(b, o.height);
      for (const Point2& e : o.top) d_e = std::max(d_e, distance(p, e));
    }
    double z;
    if (b < 0.0) {
      z = std::max(terrain.z_min, terrain.c + dl / tan_half);
      out.kinds.push_back("plain");
    } else {
      const double de_hat = std::max(d_e, dl);
      z = std::max(terrain.z_min, b + terrain.c2 + de_hat / tan_half);
      out.kinds.push_back("obstacle");
    }
    if (z > terrain.z_max)
      throw SeparationError("waypoint at (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") needs altitude " +
                            std::to_string(z) + " above z_max");
    out.set.points.push_back({p.x, p.y, z});
  }

  const auto& pts = out.set.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (distance(pts[i], pts[j]) < terrain.c1)
        throw SeparationError("waypoints " + std::to_string(i) + " and " + std::to_string(j) + " closer than c1");
    for (std::size_t k = 0; k < terrain.obstacles.size(); ++k)
      if (obstacle_distance(pts[i], terrain.obstacles[k]) < terrain.c2)
        throw SeparationError("waypoint " + std::to_string(i) + " closer than c2 to obstacle " + std::to_string(k));
    if (pts[i].z < terrain.c2) throw SeparationError("waypoint " + std::to_string(i) + " closer than c2 to ground");
  }
  return out;
}

CoverageReport visibility_coverage(const Terrain& terrain, const std::vector<Point3>& waypoints, double alpha,
                                   double spacing, Exec exec) {
  if (!(spacing > 0.0)) throw std::invalid_argument("visibility_coverage: spacing must be positive");
  const PolygonWithHoles ground = terrain.free_ground();
  const auto faces = all_faces(terrain);
  const Box box = bounds(ground.outer);
  const long nx = static_cast<long>(std::floor((box.x1 - box.x0) / spacing)) + 1;
  const long ny = static_cast<long>(std::floor((box.y1 - box.y0) / spacing)) + 1;
  std::vector<std::uint8_t> state(static_cast<std::size_t>(nx * ny), 0);
  auto sample = [&](long k) {
    return Point2{box.x0 + (static_cast<double>(k % nx) + 0.5) * spacing,
                  box.y0 + (static_cast<double>(k / nx) + 0.5) * spacing};
  };
  auto eval = [&](long k) {
    const Point2 p = sample(k);
    if (!point_in_region(p, ground)) return;
    std::uint8_t s = 2;
    for (const Point3& w : waypoints)
      if (visible(w, {p.x, p.y, 0.0}, alpha, terrain, faces)) {
        s = 1;
        break;
      }
    state[static_cast<std::size_t>(k)] = s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < nx * ny; ++k) eval(k);
  } else {
    for (long k = 0; k < nx * ny; ++k) eval(k);
  }
  CoverageReport rep;
  for (long k = 0; k < nx * ny; ++k) {
    const std::uint8_t s = state[static_cast<std::size_t>(k)];
    if (s == 0) continue;
    ++rep.samples;
    if (s == 2) {
      ++rep.uncovered;
      if (rep.uncovered_points.size() < 16) rep.uncovered_points.push_back(sample(k));
    }
  }
  return rep;
}

void write_waypoints(std::ostream& os, const std::vector<Point3>& points, const std::vector<double>& deltas) {
  if (!deltas.empty() && deltas.size() != points.size())
    throw std::invalid_argument("write_waypoints: one delta per waypoint");
  os << "x,y,z,delta\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    os << fixed(points[i].x, 6) << ',' << fixed(points[i].y, 6) << ',' << fixed(points[i].z, 6) << ','
       << fixed(deltas.empty() ? 0.0 : deltas[i], 6) << '\n';
}

WaypointFile read_waypoints(std::istream& is) {
  WaypointFile wf;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line.rfind("x,y", 0) == 0) continue;
    }
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("waypoints line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() < 2 || v.size() > 4)
      throw std::runtime_error("waypoints line " + std::to_string(lineno) + ": expected 2 to 4 columns");
    v.resize(4, 0.0);
    if (v[3] < 0.0) throw std::runtime_error("waypoints line " + std::to_string(lineno) + ": negative delta");
    wf.points.push_back({v[0], v[1], v[2]});
    wf.deltas.push_back(v[3]);
  }
  return wf;
}

}  // namespace navkit
