#include "navkit/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "navkit/rng.hpp"
#include "navkit/textio.hpp"

namespace navkit {

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

template <class P>
DistanceMatrix matrix_of(const std::vector<P>& pts) {
  const std::size_t n = pts.size();
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = distance(pts[i], pts[j]);
  return d;
}

void two_opt(std::vector<int>& order, const DistanceMatrix& d) {
  const std::size_t n = order.size();
  if (n < 4) return;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const int a = order[i], b = order[i + 1], c = order[j], e = order[(j + 1) % n];
        const double delta = d[a][c] + d[b][e] - d[a][b] - d[c][e];
        if (delta < -1e-12) {
          std::reverse(order.begin() + static_cast<long>(i) + 1, order.begin() + static_cast<long>(j) + 1);
          improved = true;
        }
      }
  }
}

}  // namespace

DistanceMatrix distance_matrix(const std::vector<Point2>& pts) { return matrix_of(pts); }
DistanceMatrix distance_matrix(const std::vector<Point3>& pts) { return matrix_of(pts); }

double cycle_length(const std::vector<int>& order, const DistanceMatrix& d) {
  double len = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) len += d[order[k]][order[(k + 1) % order.size()]];
  return len;
}

std::vector<int> nearest_neighbor_order(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<int> order{0};
  std::vector<bool> used(n, false);
  if (n == 0) return {};
  used[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const int last = order.back();
    int best = -1;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && (best < 0 || d[last][j] < d[last][best])) best = static_cast<int>(j);
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
  }
  return order;
}

std::vector<int> etsp_order(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) throw std::invalid_argument("etsp_order: need at least 2 points");
  if (n > 10) {
    std::vector<int> order = nearest_neighbor_order(d);
    two_opt(order, d);
    return order;
  }
  std::vector<int> best = nearest_neighbor_order(d);
  double best_len = cycle_length(best, d);
  std::vector<int> cur{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  std::function<void(double)> dfs = [&](double len) {
    if (len >= best_len - 1e-12) return;
    if (cur.size() == n) {
      const double total = len + d[cur.back()][0];
      if (total < best_len - 1e-12) {
        best_len = total;
        best = cur;
      }
      return;
    }
    for (std::size_t j = 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.push_back(static_cast<int>(j));
      dfs(len + d[cur[cur.size() - 2]][j]);
      cur.pop_back();
      used[j] = false;
    }
  };
  dfs(0.0);
  return best;
}

std::vector<int> etsp_order(const std::vector<Point2>& pts) { return etsp_order(distance_matrix(pts)); }
std::vector<int> etsp_order(const std::vector<Point3>& pts) { return etsp_order(distance_matrix(pts)); }

int count_sharp_turns(const std::vector<DubinsPath>& edges) {
  int count = 0;
  for (const DubinsPath& e : edges)
    for (int k = 0; k < 3; ++k)
      if (e.is_turn(k) && e.params[static_cast<std::size_t>(k)] > kPi / 2.0 + 1e-9) ++count;
  return count;
}

namespace {

double heading(Point2 a, Point2 b) { return std::atan2(b.y - a.y, b.x - a.x); }

VelocityLimits planar_limits() { return VelocityLimits{}; }

void finish_planar(Tour& t, double r_min) {
  t.length = 0.0;
  for (const DubinsPath& e : t.edges) t.length += e.length();
  t.sharp_turns = count_sharp_turns(t.edges);
  const std::vector<PathSample> samples = sample_dubins(t.edges, std::max(0.05, r_min / 4.0));
  const SpeedProfile prof = travel_profile(samples, planar_limits());
  t.est_time = prof.time;
  // Attribute each sample interval to the edge holding its midpoint.
  std::vector<double> ends;
  double acc = 0.0;
  for (const DubinsPath& e : t.edges) ends.push_back(acc += e.length());
  t.piece_times.assign(t.edges.size(), 0.0);
  std::size_t edge = 0;
  for (std::size_t k = 0; k + 1 < prof.s.size(); ++k) {
    const double mid = 0.5 * (prof.s[k] + prof.s[k + 1]);
    while (edge + 1 < ends.size() && mid > ends[edge]) ++edge;
    t.piece_times[edge] += prof.segment_time[k];
  }
}

}  // namespace

Tour alternating_tour(const std::vector<int>& order, const std::vector<Point2>& pts, double r_min) {
  const std::size_t n = order.size();
  if (n < 2) throw std::invalid_argument("alternating_tour: need at least 2 points");
  if (!(r_min > 0.0)) throw std::invalid_argument("alternating_tour: R_min must be positive");
  auto P = [&](std::size_t j) { return pts[static_cast<std::size_t>(order[j % n])]; };
  // Edge k (1-based) runs from order[k-1] to order[k mod n].
  auto is_straight = [&](std::size_t k) { return k % 2 == 1 && (n % 2 == 0 || k < n); };
  Tour t;
  t.algorithm = "alternating";
  t.order = order;
  for (std::size_t j = 0; j < n; ++j) {
    double th;
    if (j == 0) {
      th = heading(P(0), P(1));
    } else if (j % 2 == 1) {
      th = heading(P(j - 1), P(j));  // end of a straight edge
    } else if (is_straight(j + 1)) {
      th = heading(P(j), P(j + 1));
    } else {
      th = heading(P(j), P(j + 1));  // both neighbouring edges are Dubins
    }
    t.poses.push_back({P(j).x, P(j).y, th});
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const Pose2& a = t.poses[k - 1];
    const Pose2& b = t.poses[k % n];
    t.edges.push_back(dubins_shortest(a, b, r_min));
    t.straight.push_back(is_straight(k));
  }
  finish_planar(t, r_min);
  return t;
}

std::vector<int> spiral_order(const std::vector<Point2>& pts, std::optional<Point2> entry) {
  std::vector<int> remaining(pts.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> order;
  std::optional<Point2> last = entry;
  auto nearest_pos = [&](const std::vector<int>& ids, Point2 q) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (distance(pts[static_cast<std::size_t>(ids[i])], q) <
          distance(pts[static_cast<std::size_t>(ids[best])], q))
        best = i;
    return best;
  };
  while (!remaining.empty()) {
    std::vector<Point2> sub;
    for (int id : remaining) sub.push_back(pts[static_cast<std::size_t>(id)]);
    std::vector<std::size_t> hull = remaining.size() >= 3 ? convex_hull_indices(sub) : std::vector<std::size_t>{};
    if (hull.size() < 3) {
      // Collinear or tiny remainder: nearest neighbour from the last exit.
      while (!remaining.empty()) {
        const std::size_t k = last ? nearest_pos(remaining, *last) : 0;
        order.push_back(remaining[k]);
        last = pts[static_cast<std::size_t>(remaining[k])];
        remaining.erase(remaining.begin() + static_cast<long>(k));
      }
      break;
    }
    std::vector<int> layer;
    for (std::size_t h : hull) layer.push_back(remaining[h]);
    const std::size_t start = last ? nearest_pos(layer, *last) : 0;
    for (std::size_t i = 0; i < layer.size(); ++i) order.push_back(layer[(start + i) % layer.size()]);
    last = pts[static_cast<std::size_t>(order.back())];
    std::vector<int> rest;
    for (int id : remaining)
      if (std::find(layer.begin(), layer.end(), id) == layer.end()) rest.push_back(id);
    remaining = std::move(rest);
  }
  return order;
}

Tour dubins_tour(const std::string& algorithm, const std::vector<int>& order, const std::vector<Point2>& pts,
                 double r_min) {
  const std::size_t n = order.size();
  if (n < 2) throw std::invalid_argument("dubins_tour: need at least 2 points");
  if (!(r_min > 0.0)) throw std::invalid_argument("dubins_tour: R_min must be positive");
  Tour t;
  t.algorithm = algorithm;
  t.order = order;
  for (std::size_t j = 0; j < n; ++j) {
    const Point2 prev = pts[static_cast<std::size_t>(order[(j + n - 1) % n])];
    const Point2 cur = pts[static_cast<std::size_t>(order[j])];
    const Point2 next = pts[static_cast<std::size_t>(order[(j + 1) % n])];
    Point2 in = cur - prev, out = next - cur;
    if (norm(in) > 0.0) in = in / norm(in);
    if (norm(out) > 0.0) out = out / norm(out);
    Point2 dir = in + out;
    if (norm(dir) < 1e-9) dir = Point2{-out.y, out.x};  // reversal: leave sideways
    if (norm(dir) < 1e-9) dir = Point2{1.0, 0.0};
    t.poses.push_back({cur.x, cur.y, std::atan2(dir.y, dir.x)});
  }
  // Headings: kHeadingCandidates rotations of the bisector per point, chosen by
  // cyclic dynamic programming over the closed order.
  constexpr std::size_t K = kHeadingCandidates;
  auto cand = [&](std::size_t j, std::size_t c) {
    Pose2 p = t.poses[j];
    p.theta = wrap_angle(p.theta + 2.0 * kPi * static_cast<double>(c) / K);
    return p;
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double best_total = kInf;
  std::vector<std::size_t> best_choice(n, 0);
  std::vector<std::vector<std::size_t>> back(n, std::vector<std::size_t>(K, 0));
  for (std::size_t c0 = 0; c0 < K; ++c0) {
    std::vector<double> cost(K, kInf);
    cost[c0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<double> next(K, kInf);
      const std::size_t jj = j % n;
      for (std::size_t b = 0; b < K; ++b) {
        if (jj == 0 && b != c0) continue;
        for (std::size_t a = 0; a < K; ++a) {
          if (cost[a] == kInf) continue;
          const double v = cost[a] + dubins_shortest(cand(j - 1, a), cand(jj, b), r_min).length();
          if (v < next[b]) {
            next[b] = v;
            back[jj][b] = a;
          }
        }
      }
      cost = std::move(next);
    }
    if (cost[c0] < best_total - 1e-12) {
      best_total = cost[c0];
      std::size_t c = c0;
      for (std::size_t j = n; j-- > 0;) {
        const std::size_t prev = back[(j + 1) % n][c];
        best_choice[j] = prev;
        c = prev;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) t.poses[j] = cand(j, best_choice[j]);
  for (std::size_t k = 0; k < n; ++k) {
    t.edges.push_back(dubins_shortest(t.poses[k], t.poses[(k + 1) % n], r_min));
    t.straight.push_back(false);
  }
  finish_planar(t, r_min);
  return t;
}

Tour spiral_tour(const std::vector<Point2>& pts, double r_min) {
  if (pts.size() < 3) throw std::invalid_argument("spiral_tour: need at least 3 points");
  if (convex_hull_indices(pts).size() < 3) {
    Tour t = alternating_tour(etsp_order(pts), pts, r_min);
    t.algorithm = "spiral";
    t.notes.push_back("collinear input: alternating fallback");
    return t;
  }
  return dubins_tour("spiral", spiral_order(pts), pts, r_min);
}

KMeansResult kmeans(const std::vector<Point2>& pts, int k, std::uint64_t seed) {
  const std::size_t n = pts.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  Rng rng(seed);
  KMeansResult r;
  r.centers.push_back(pts[rng.below(n)]);
  while (r.centers.size() < static_cast<std::size_t>(k)) {
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = kBig;
      for (const Point2& c : r.centers) best = std::min(best, dot(pts[i] - c, pts[i] - c));
      w[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      while (pick + 1 < n && u >= w[pick]) u -= w[pick++];
    } else {
      pick = rng.below(n);
    }
    r.centers.push_back(pts[pick]);
  }
  r.labels.assign(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      for (int c = 1; c < k; ++c)
        if (dot(pts[i] - r.centers[c], pts[i] - r.centers[c]) < dot(pts[i] - r.centers[best], pts[i] - r.centers[best]))
          best = c;
      if (r.labels[i] != best) {
        r.labels[i] = best;
        changed = true;
      }
    }
    std::vector<Point2> sum(static_cast<std::size_t>(k));
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[static_cast<std::size_t>(r.labels[i])] = sum[static_cast<std::size_t>(r.labels[i])] + pts[i];
      ++cnt[static_cast<std::size_t>(r.labels[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[static_cast<std::size_t>(c)] > 0) {
        r.centers[static_cast<std::size_t>(c)] = sum[static_cast<std::size_t>(c)] / cnt[static_cast<std::size_t>(c)];
        continue;
      }
      // Empty cluster: take over the point farthest from its center.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dd = distance(pts[i], r.centers[static_cast<std::size_t>(r.labels[i])]);
        if (dd > far_d) {
          far_d = dd;
          far = i;
        }
      }
      r.centers[static_cast<std::size_t>(c)] = pts[far];
      r.labels[far] = c;
      changed = true;
    }
    if (!changed) break;
  }
  r.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = pts[i] - r.centers[static_cast<std::size_t>(r.labels[i])];
    r.inertia += dot(d, d);
  }
  return r;
}

int gap_statistic_k(const std::vector<Point2>& pts, int k_max, int B, std::uint64_t seed) {
  const int n = static_cast<int>(pts.size());
  k_max = std::min(k_max, n);
  if (k_max <= 1) return 1;
  double x0 = kBig, y0 = kBig, x1 = -kBig, y1 = -kBig;
  for (const Point2& p : pts) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  auto logw = [&](const std::vector<Point2>& data, int k, std::uint64_t s) {
    return std::log(std::max(kmeans(data, k, s).inertia, 1e-300));
  };
  std::vector<double> gap(static_cast<std::size_t>(k_max + 1)), sk(static_cast<std::size_t>(k_max + 1));
  for (int k = 1; k <= k_max; ++k) {
    std::vector<double> ref;
    for (int b = 0; b < B; ++b) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(1000 * k + b)));
      std::vector<Point2> data;
      for (int i = 0; i < n; ++i) data.push_back({rng.uniform(x0, x1), rng.uniform(y0, y1)});
      ref.push_back(logw(data, k, Rng::derive(seed, static_cast<std::uint64_t>(b))));
    }
    const double mean = std::accumulate(ref.begin(), ref.end(), 0.0) / B;
    double var = 0.0;
    for (double v : ref) var += (v - mean) * (v - mean);
    gap[static_cast<std::size_t>(k)] = mean - logw(pts, k, seed);
    sk[static_cast<std::size_t>(k)] = std::sqrt(var / B) * std::sqrt(1.0 + 1.0 / B);
  }
  for (int k = 1; k < k_max; ++k)
    if (gap[static_cast<std::size_t>(k)] >= gap[static_cast<std::size_t>(k + 1)] - sk[static_cast<std::size_t>(k + 1)])
      return k;
  return k_max;
}

Tour clustered_spiral_alternating(const std::vector<Point2>& pts, std::optional<std::vector<int>> labels,
                                  double r_min, std::uint64_t seed) {
  if (pts.size() < 3) throw std::invalid_argument("clustered_spiral_alternating: need at least 3 points");
  std::vector<int> lab;
  if (labels) {
    lab = *labels;
    if (lab.size() != pts.size()) throw std::invalid_argument("clustered_spiral_alternating: one label per point");
  } else {
    lab = kmeans(pts, gap_statistic_k(pts, 4, 10, seed), seed).labels;
  }
  const int K = lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < lab.size(); ++i) {
    if (lab[i] < 0) throw std::invalid_argument("clustered_spiral_alternating: negative label");
    members[static_cast<std::size_t>(lab[i])].push_back(static_cast<int>(i));
  }
  for (int c = 0; c < K; ++c)
    if (members[static_cast<std::size_t>(c)].empty())
      throw std::invalid_argument("clustered_spiral_alternating: empty cluster " + std::to_string(c));
  if (K == 1) {
    Tour t = spiral_tour(pts, r_min);
    t.algorithm = "csa";
    return t;
  }
  std::vector<Point2> centroids;
  for (const auto& m : members) {
    Point2 c{};
    for (int id : m) c = c + pts[static_cast<std::size_t>(id)];
    centroids.push_back(c / static_cast<double>(m.size()));
  }
  // Start with the cluster holding point 0.
  std::vector<int> cluster_order = etsp_order(centroids);
  const auto first = std::find(cluster_order.begin(), cluster_order.end(), lab[0]);
  std::rotate(cluster_order.begin(), first, cluster_order.end());

  std::vector<int> order;
  std::optional<Point2> exit;
  for (int c : cluster_order) {
    const auto& m = members[static_cast<std::size_t>(c)];
    std::vector<Point2> sub;
    for (int id : m) sub.push_back(pts[static_cast<std::size_t>(id)]);
    for (int local : spiral_order(sub, exit)) order.push_back(m[static_cast<std::size_t>(local)]);
    exit = pts[static_cast<std::size_t>(order.back())];
  }
  Tour t = dubins_tour("csa", order, pts, r_min);
  t.notes.push_back("clusters: " + std::to_string(K));
  return t;
}

void VelocityLimits::validate() const {
  if (!(a_ver > 0.0 && v_ver > 0.0 && a_hor > 0.0 && v_hor > 0.0))
    throw std::invalid_argument("velocity limits must be positive");
}

SpeedProfile travel_profile(const std::vector<PathSample>& samples, const VelocityLimits& lim) {
  lim.validate();
  SpeedProfile prof;
  const std::size_t n = samples.size();
  for (const PathSample& p : samples) prof.s.push_back(p.s);
  prof.v.assign(n, 0.0);
  prof.segment_time.assign(n > 0 ? n - 1 : 0, 0.0);
  if (n < 2) return prof;
  std::vector<double> alim(n), cap(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& t = samples[i].tangent;
    const double sp = std::abs(t.z);
    const double cp = std::hypot(t.x, t.y);
    const double a = std::min(cp > 1e-12 ? lim.a_hor / cp : kBig, sp > 1e-12 ? lim.a_ver / sp : kBig);
    const double v = std::min(cp > 1e-12 ? lim.v_hor / cp : kBig, sp > 1e-12 ? lim.v_ver / sp : kBig);
    alim[i] = a;
    const double k = samples[i].kappa;
    cap[i] = std::isfinite(k) ? (k > 0.0 ? std::min(v, std::sqrt(a / k)) : v) : 0.0;
  }
  auto a_tan = [&](std::size_t i, double v) {
    const double ar = samples[i].kappa * v * v;
    return std::sqrt(std::max(0.0, alim[i] * alim[i] - ar * ar));
  };
  std::vector<double>& v = prof.v;
  v[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ds = samples[i + 1].s - samples[i].s;
    v[i + 1] = std::min(cap[i + 1], std::sqrt(v[i] * v[i] + 2.0 * a_tan(i, v[i]) * ds));
  }
  v[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double ds = samples[i + 1].s - samples[i].s;
    v[i] = std::min(v[i], std::sqrt(v[i + 1] * v[i + 1] + 2.0 * a_tan(i + 1, v[i + 1]) * ds));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ds = samples[i + 1].s - samples[i].s;
    if (ds <= 0.0) continue;
    const double vs = v[i] + v[i + 1];
    if (!(vs > 0.0)) throw InfeasibleCurvature("curvature forces zero speed over a positive length");
    prof.segment_time[i] = 2.0 * ds / vs;
    prof.time += prof.segment_time[i];
  }
  return prof;
}

std::vector<PathSample> sample_trajectory(const CompositeTrajectory& traj, int spp) {
  if (spp < 2) throw std::invalid_argument("sample_trajectory: need at least 2 samples per piece");
  std::vector<PathSample> out;
  double s = 0.0;
  Point3 prev{};
  for (std::size_t i = 0; i < traj.pieces.size(); ++i) {
    const CubicBezier& c = traj.pieces[i];
    for (int k = (i == 0 ? 0 : 1); k <= spp; ++k) {
      const double t = static_cast<double>(k) / spp;
      const Point3 p = c.eval(t);
      if (!out.empty()) s += distance(prev, p);
      prev = p;
      Vec3 d = c.derivative(t);
      if (norm(d) < 1e-12) d = c.p[3] - c.p[0];
      PathSample ps;
      ps.s = s;
      ps.tangent = norm(d) > 0.0 ? normalized(d) : Vec3{1.0, 0.0, 0.0};
      ps.kappa = c.curvature(t);
      if (k == spp && i + 1 < traj.pieces.size())
        ps.kappa = std::max(ps.kappa, traj.pieces[i + 1].curvature(0.0));
      out.push_back(ps);
    }
  }
  return out;
}

std::vector<PathSample> sample_dubins(const std::vector<DubinsPath>& edges, double ds) {
  if (!(ds > 0.0)) throw std::invalid_argument("sample_dubins: ds must be positive");
  std::vector<PathSample> out;
  double base = 0.0;
  auto push = [&](double s, double theta, double kappa) {
    if (!out.empty() && s <= out.back().s + 1e-12) {
      out.back().kappa = std::max(out.back().kappa, kappa);
      return;
    }
    out.push_back({s, {std::cos(theta), std::sin(theta), 0.0}, kappa});
  };
  for (const DubinsPath& e : edges) {
    double local = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double len = e.segment_length(k);
      if (len <= 0.0) continue;
      const double kappa = e.is_turn(k) ? 1.0 / e.radius : 0.0;
      const int steps = e.is_turn(k) ? std::max(4, static_cast<int>(std::ceil(e.params[static_cast<std::size_t>(k)] / (kPi / 32.0))))
                                     : std::max(1, static_cast<int>(std::ceil(len / ds)));
      for (int j = 0; j <= steps; ++j) {
        const double s = local + len * j / steps;
        push(base + s, e.sample(s).theta, kappa);
      }
      local += len;
    }
    base += e.length();
  }
  return out;
}

double travel_time(const CompositeTrajectory& traj, const VelocityLimits& limits, int spp) {
  return travel_profile(sample_trajectory(traj, spp), limits).time;
}

std::vector<double> piece_times(const CompositeTrajectory& traj, const VelocityLimits& limits, int spp) {
  const SpeedProfile prof = travel_profile(sample_trajectory(traj, spp), limits);
  std::vector<double> out(traj.pieces.size(), 0.0);
  for (std::size_t k = 0; k < prof.segment_time.size(); ++k)
    out[std::min(k / static_cast<std::size_t>(spp), out.size() - 1)] += prof.segment_time[k];
  return out;
}

double som_neighborhood(double sigma, double d, std::size_t M) {
  if (d < 0.2 * static_cast<double>(M)) return std::exp(-(d * d) / (sigma * sigma));
  return 0.0;
}

Point3 alternate_location(const Point3& nu, const Point3& p, double delta) {
  const double dist = distance(nu, p);
  if (dist <= delta) return nu;
  return p + (nu - p) * (delta / dist);
}

CompositeTrajectory initial_trajectory(const std::vector<Point3>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("initial_trajectory: need at least 2 joints");
  std::vector<Joint> joints;
  std::vector<TangentLengths> tl;
  for (std::size_t j = 0; j < n; ++j) {
    const Point3 prev = pts[(j + n - 1) % n], cur = pts[j], next = pts[(j + 1) % n];
    Vec3 in = cur - prev, out = next - cur;
    if (norm(in) > 0.0) in = normalized(in);
    if (norm(out) > 0.0) out = normalized(out);
    Vec3 dir = in + out;
    if (norm(dir) < 1e-9) dir = Vec3{-out.y, out.x, 0.0};
    if (norm(dir) < 1e-9) dir = Vec3{1.0, 0.0, 0.0};
    Joint jt;
    jt.position = cur;
    jt.psi = std::asin(std::clamp(normalized(dir).z, -1.0, 1.0));
    jt.theta = std::atan2(dir.y, dir.x);
    joints.push_back(jt);
    const double chord = std::max(distance(cur, next), 1e-6);
    tl.push_back({chord / 3.0, chord / 3.0});
  }
  return stitch_smooth(joints, tl, true);
}

namespace {

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters, double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    arg = c;
    return fc;
  }
  arg = d;
  return fd;
}

double safe_time(const CompositeTrajectory& t, const VelocityLimits& lim, int spp) {
  try {
    return travel_time(t, lim, spp);
  } catch (const InfeasibleCurvature&) {
    return kBig;
  }
}

}  // namespace

CompositeTrajectory lio_optimize(const CompositeTrajectory& traj, const VelocityLimits& limits,
                                 const LioParams& params, std::vector<double>* log) {
  std::vector<Joint> joints = traj.joints;
  std::vector<TangentLengths> tl = traj.tangents;
  const bool closed = traj.closed;
  const std::size_t n = joints.size();
  const std::size_t pieces = tl.size();
  auto build = [&]() { return stitch_smooth(joints, tl, closed); };
  double best = safe_time(traj, limits, params.samples_per_piece);
  if (log) log->push_back(best);
  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) {
      // Coordinates: heading, pitch, leaving length, arriving length.
      for (int coord = 0; coord < 4; ++coord) {
        double* var = nullptr;
        double lo, hi;
        const bool has_leave = closed || j < pieces;
        const bool has_arrive = closed || j > 0;
        if (coord == 0) {
          var = &joints[j].theta;
          lo = *var - params.angle_bound;
          hi = *var + params.angle_bound;
        } else if (coord == 1) {
          var = &joints[j].psi;
          lo = std::max(*var - params.angle_bound, -kPi / 2.0 + 0.01);
          hi = std::min(*var + params.angle_bound, kPi / 2.0 - 0.01);
        } else if (coord == 2 && has_leave) {
          var = &tl[j % pieces].la;
          lo = *var * params.scale_lo;
          hi = *var * params.scale_hi;
        } else if (coord == 3 && has_arrive) {
          var = &tl[(j + pieces - 1) % pieces].lb;
          lo = *var * params.scale_lo;
          hi = *var * params.scale_hi;
        } else {
          continue;
        }
        if (!(hi > lo)) continue;
        const double keep = *var;
        auto f = [&](double x) {
          *var = x;
          return safe_time(build(), limits, params.samples_per_piece);
        };
        double arg = keep;
        const double val = golden_min(f, lo, hi, params.golden_iters, arg);
        if (val < best * (1.0 - 1e-12)) {
          *var = arg;
          best = val;
        } else {
          *var = keep;
        }
      }
    }
    if (log) log->push_back(best);
  }
  return build();
}

CompositeTrajectory relax_in_neighborhoods(const CompositeTrajectory& traj, const std::vector<Point3>& waypoints,
                                           const std::vector<double>& deltas, const VelocityLimits& limits,
                                           const LioParams& params) {
  std::vector<Joint> joints = traj.joints;
  const std::vector<TangentLengths> tl = traj.tangents;
  if (waypoints.size() != joints.size() || deltas.size() != joints.size())
    throw std::invalid_argument("relax_in_neighborhoods: one waypoint and delta per joint");
  auto build = [&]() { return stitch_smooth(joints, tl, traj.closed); };
  double best = safe_time(traj, limits, params.samples_per_piece);
  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    for (std::size_t j = 0; j < joints.size(); ++j) {
      const double delta = deltas[j];
      if (!(delta > 0.0)) continue;
      for (int axis = 0; axis < 3; ++axis) {
        const Point3 keep = joints[j].position;
        auto place = [&](double x) {
          Point3 q = keep;
          (axis == 0 ? q.x : axis == 1 ? q.y : q.z) += x;
          return alternate_location(q, waypoints[j], delta);
        };
        auto f = [&](double x) {
          joints[j].position = place(x);
          return safe_time(build(), limits, params.samples_per_piece);
        };
        double arg = 0.0;
        const double val = golden_min(f, -2.0 * delta, 2.0 * delta, params.golden_iters, arg);
        if (val < best * (1.0 - 1e-12)) {
          joints[j].position = place(arg);
          best = val;
        } else {
          joints[j].position = keep;
        }
      }
    }
  }
  return build();
}

namespace {

int count_bezier_sharp_turns(const CompositeTrajectory& traj) {
  int count = 0;
  for (const CubicBezier& c : traj.pieces) {
    double turn = 0.0;
    Vec3 prev = c.derivative(0.0);
    for (int k = 1; k <= 64; ++k) {
      const Vec3 cur = c.derivative(k / 64.0);
      if (norm(prev) > 1e-12 && norm(cur) > 1e-12)
        turn += std::acos(std::clamp(dot(normalized(prev), normalized(cur)), -1.0, 1.0));
      prev = cur;
    }
    if (turn > kPi / 2.0 + 1e-9) ++count;
  }
  return count;
}

Tour finish_bezier(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                   const std::vector<int>& order, std::vector<Point3> joints, const VelocityLimits& limits,
                   const SomParams& params, std::vector<double>* lio_log) {
  LioParams lp;
  lp.sweeps = params.lio_sweeps;
  lp.samples_per_piece = params.samples_per_piece;
  CompositeTrajectory traj = lio_optimize(initial_trajectory(joints), limits, lp, lio_log);
  std::vector<Point3> wps;
  std::vector<double> ds;
  for (int id : order) {
    wps.push_back(waypoints[static_cast<std::size_t>(id)]);
    ds.push_back(deltas[static_cast<std::size_t>(id)]);
  }
  if (std::any_of(ds.begin(), ds.end(), [](double d) { return d > 0.0; })) {
    traj = relax_in_neighborhoods(traj, wps, ds, limits, lp);
    traj = lio_optimize(traj, limits, lp, lio_log ? lio_log : nullptr);
  }
  Tour t;
  t.algorithm = "som";
  t.order = order;
  t.length = traj.length();
  t.est_time = travel_time(traj, limits, params.samples_per_piece);
  t.piece_times = piece_times(traj, limits, params.samples_per_piece);
  t.sharp_turns = count_bezier_sharp_turns(traj);
  t.bezier = std::move(traj);
  return t;
}

}  // namespace

Tour plan_with_order(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                     const std::vector<int>& order, const VelocityLimits& limits, const SomParams& params,
                     std::vector<double>* lio_log) {
  if (waypoints.size() != deltas.size()) throw std::invalid_argument("plan_with_order: one delta per waypoint");
  std::vector<Point3> joints;
  for (int id : order) joints.push_back(waypoints[static_cast<std::size_t>(id)]);
  return finish_bezier(waypoints, deltas, order, joints, limits, params, lio_log);
}

SomReport som_plan(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                   const VelocityLimits& limits, const SomParams& params) {
  const std::size_t n = waypoints.size();
  if (n < 2) throw std::invalid_argument("som_plan: need at least 2 waypoints");
  if (deltas.size() != n) throw std::invalid_argument("som_plan: one delta per waypoint");
  if (deltas[0] != 0.0) throw std::invalid_argument("som_plan: the initial location needs delta 0");
  for (double d : deltas)
    if (!(d >= 0.0)) throw std::invalid_argument("som_plan: deltas must be non-negative");
  limits.validate();

  SomReport rep;
  Rng rng(params.seed);
  const Point3 p1 = waypoints[0];
  double spread = 0.0;
  for (const Point3& p : waypoints) spread = std::max(spread, distance(p, p1));
  const double r0 = std::max(1e-3, 0.1 * spread);
  std::vector<Point3> ring;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    ring.push_back(p1 + Point3{r0 * std::cos(a), r0 * std::sin(a), 0.0});
  }
  rep.neuron_counts.push_back(ring.size());
  double sigma = 12.41 * static_cast<double>(n) + 0.6;
  std::vector<int> winner_of(n, -1);

  for (int epoch = 1; epoch <= params.i_max; ++epoch) {
    // Regenerate the loop up to 2n neurons by midpoint insertion.
    std::vector<Point3> grown;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      grown.push_back(ring[k]);
      if (grown.size() + (ring.size() - k - 1) < 2 * n)
        grown.push_back((ring[k] + ring[(k + 1) % ring.size()]) * 0.5);
    }
    ring = std::move(grown);
    rep.neuron_counts.push_back(ring.size());
    const std::size_t M = ring.size();

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<bool> taken(M, false);
    double max_gap = 0.0;
    bool all_inside = true;
    for (int pi : perm) {
      const Point3 p = waypoints[static_cast<std::size_t>(pi)];
      int w = -1;
      for (std::size_t k = 0; k < M; ++k)
        if (!taken[k] && (w < 0 || distance(ring[k], p) < distance(ring[static_cast<std::size_t>(w)], p)))
          w = static_cast<int>(k);
      taken[static_cast<std::size_t>(w)] = true;
      winner_of[static_cast<std::size_t>(pi)] = w;
      const Point3 sp = alternate_location(ring[static_cast<std::size_t>(w)], p, deltas[static_cast<std::size_t>(pi)]);
      for (std::size_t k = 0; k < M; ++k) {
        const std::size_t diff = k > static_cast<std::size_t>(w) ? k - w : w - k;
        const double d = static_cast<double>(std::min(diff, M - diff));
        const double f = som_neighborhood(sigma, d, M);
        if (f > 0.0) ring[k] = ring[k] + (sp - ring[k]) * (params.mu * f);
      }
      const Point3& nw = ring[static_cast<std::size_t>(w)];
      max_gap = std::max(max_gap, distance(nw, sp));
      if (distance(nw, p) > deltas[static_cast<std::size_t>(pi)] + 1e-9) all_inside = false;
    }
    // Keep only winners, in ring order.
    std::vector<std::pair<int, int>> kept;  // (ring index, waypoint)
    for (std::size_t i = 0; i < n; ++i) kept.push_back({winner_of[i], static_cast<int>(i)});
    std::sort(kept.begin(), kept.end());
    std::vector<Point3> next;
    for (std::size_t r = 0; r < kept.size(); ++r) {
      next.push_back(ring[static_cast<std::size_t>(kept[r].first)]);
      winner_of[static_cast<std::size_t>(kept[r].second)] = static_cast<int>(r);
    }
    ring = std::move(next);
    rep.neuron_counts.push_back(ring.size());
    sigma *= (1.0 - params.eta);
    rep.epochs = epoch;
    if (max_gap < 1e-3 || all_inside) {
      rep.converged = true;
      break;
    }
  }

  // Visit order from the ring, starting at the initial location.
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[static_cast<std::size_t>(winner_of[i])] = static_cast<int>(i);
  std::rotate(order.begin(), std::find(order.begin(), order.end(), 0), order.end());
  std::vector<Point3> joints;
  for (int id : order)
    joints.push_back(alternate_location(ring[static_cast<std::size_t>(winner_of[static_cast<std::size_t>(id)])],
                                        waypoints[static_cast<std::size_t>(id)], deltas[static_cast<std::size_t>(id)]));
  rep.tour = finish_bezier(waypoints, deltas, order, joints, limits, params, &rep.lio_times);
  if (!rep.converged) rep.tour.notes.push_back("map not converged at i_max");
  return rep;
}

std::vector<PhaseOffset> split_phases(double length, double time, int k) {
  if (k < 1) throw std::invalid_argument("split_phases: k must be at least 1");
  std::vector<PhaseOffset> out;
  for (int i = 0; i < k; ++i) out.push_back({length * i / k, time * i / k});
  return out;
}

std::vector<SubsetPlan> split_subsets(const std::vector<Point3>& waypoints, const std::vector<double>& deltas, int k,
                                      const VelocityLimits& limits, const SomParams& params) {
  if (k < 1) throw std::invalid_argument("split_subsets: k must be at least 1");
  if (static_cast<std::size_t>(k) > waypoints.size())
    throw std::invalid_argument("split_subsets: more vehicles than waypoints");
  std::vector<Point2> plan;
  for (const Point3& p : waypoints) plan.push_back(xy(p));
  const std::vector<int> labels = k == 1 ? std::vector<int>(waypoints.size(), 0) : kmeans(plan, k, params.seed).labels;
  std::vector<SubsetPlan> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i])].members.push_back(static_cast<int>(i));
  for (SubsetPlan& sp : out) {
    // The member closest to the global start is this vehicle's start.
    auto start = std::min_element(sp.members.begin(), sp.members.end(), [&](int a, int b) {
      return distance(waypoints[static_cast<std::size_t>(a)], waypoints[0]) <
             distance(waypoints[static_cast<std::size_t>(b)], waypoints[0]);
    });
    std::rotate(sp.members.begin(), start, sp.members.end());
    if (sp.members.size() == 1) {
      sp.tour.algorithm = "som";
      sp.tour.order = {0};
      continue;
    }
    std::vector<Point3> w;
    std::vector<double> d;
    for (int id : sp.members) {
      w.push_back(waypoints[static_cast<std::size_t>(id)]);
      d.push_back(deltas[static_cast<std::size_t>(id)]);
    }
    d[0] = 0.0;
    sp.tour = som_plan(w, d, limits, params).tour;
    for (int& o : sp.tour.order) o = sp.members[static_cast<std::size_t>(o)];
  }
  return out;
}

void write_tour(std::ostream& os, const Tour& t) {
  os << "# navkit tour v1\n";
  os << "# algorithm " << t.algorithm << '\n';
  os << "# order";
  for (int id : t.order) os << ' ' << id;
  os << '\n';
  os << "# length " << fixed(t.length, 6) << '\n';
  os << "# est_time " << fixed(t.est_time, 6) << '\n';
  os << "# sharp_turns " << t.sharp_turns << '\n';
  for (const std::string& note : t.notes) os << "# note " << note << '\n';
  os << "piece_index,type,parameters,est_time_s\n";
  auto time_of = [&](std::size_t k) { return k < t.piece_times.size() ? t.piece_times[k] : 0.0; };
  if (t.bezier) {
    for (std::size_t k = 0; k < t.bezier->pieces.size(); ++k) {
      os << k << ",bezier";
      for (const Point3& p : t.bezier->pieces[k].p) os << ',' << fixed(p.x, 9) << ',' << fixed(p.y, 9) << ',' << fixed(p.z, 9);
      os << ',' << fixed(time_of(k), 6) << '\n';
    }
    return;
  }
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const DubinsPath& e = t.edges[k];
    if (k < t.straight.size() && t.straight[k]) {
      const Pose2 b = e.end();
      os << k << ",line," << fixed(e.start.x, 9) << ',' << fixed(e.start.y, 9) << ",0," << fixed(b.x, 9) << ','
         << fixed(b.y, 9) << ",0," << fixed(time_of(k), 6) << '\n';
      continue;
    }
    os << k << ",dubins," << fixed(e.start.x, 9) << ',' << fixed(e.start.y, 9) << ',' << fixed(e.start.theta, 9) << ','
       << fixed(e.radius, 9) << ',' << to_string(e.word) << ',' << fixed(e.params[0], 9) << ','
       << fixed(e.params[1], 9) << ',' << fixed(e.params[2], 9) << ',' << fixed(time_of(k), 6) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

double to_num(const std::string& s, int lineno) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("tour line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

TourFile read_tour(std::istream& is) {
  TourFile tf;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "algorithm") ls >> tf.algorithm;
      else if (key == "order") {
        int id;
        while (ls >> id) tf.order.push_back(id);
      } else if (key == "length") ls >> tf.length;
      else if (key == "est_time") ls >> tf.est_time;
      continue;
    }
    if (!header) {
      if (line.rfind("piece_index,", 0) != 0) throw std::runtime_error("tour line " + std::to_string(lineno) + ": missing header");
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() < 2) throw std::runtime_error("tour line " + std::to_string(lineno) + ": too few fields");
    std::vector<Point3> poly;
    if (f[1] == "line" && f.size() == 9) {
      poly.push_back({to_num(f[2], lineno), to_num(f[3], lineno), to_num(f[4], lineno)});
      poly.push_back({to_num(f[5], lineno), to_num(f[6], lineno), to_num(f[7], lineno)});
    } else if (f[1] == "bezier" && f.size() == 15) {
      CubicBezier c;
      for (int k = 0; k < 4; ++k)
        c.p[static_cast<std::size_t>(k)] = {to_num(f[2 + 3 * k], lineno), to_num(f[3 + 3 * k], lineno),
                                            to_num(f[4 + 3 * k], lineno)};
      for (int k = 0; k <= 32; ++k) poly.push_back(c.eval(k / 32.0));
    } else if (f[1] == "dubins" && f.size() == 11) {
      DubinsPath e;
      e.start = {to_num(f[2], lineno), to_num(f[3], lineno), to_num(f[4], lineno)};
      e.radius = to_num(f[5], lineno);
      bool found = false;
      for (DubinsWord w : {DubinsWord::LSL, DubinsWord::LSR, DubinsWord::RSL, DubinsWord::RSR, DubinsWord::RLR,
                           DubinsWord::LRL})
        if (to_string(w) == f[6]) {
          e.word = w;
          found = true;
        }
      if (!found) throw std::runtime_error("tour line " + std::to_string(lineno) + ": unknown Dubins word");
      e.params = {to_num(f[7], lineno), to_num(f[8], lineno), to_num(f[9], lineno)};
      const double L = e.length();
      for (int k = 0; k <= 32; ++k) {
        const Pose2 q = e.sample(L * k / 32.0);
        poly.push_back({q.x, q.y, 0.0});
      }
    } else {
      throw std::runtime_error("tour line " + std::to_string(lineno) + ": unknown piece type or field count");
    }
    tf.polylines.push_back(std::move(poly));
  }
  if (!header) throw std::runtime_error("tour file has no piece table");
  return tf;
}

}  // namespace navkit
