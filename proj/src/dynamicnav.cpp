#include "navkit/dynamicnav.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace navkit {

void SensingDisc::validate() const {
  if (!(r_s > 0.0)) throw std::invalid_argument("sensing radius must be positive");
  if (ray_count < 2) throw std::invalid_argument("sensing disc needs at least 2 rays");
}

BinaryScan scan(const std::vector<Obstacle2D>& obstacles, const UnicycleState& s, const SensingDisc& disc,
                double inflate) {
  disc.validate();
  BinaryScan out;
  out.theta = s.theta;
  const Point2 pos{s.x, s.y};
  // Inside a grown boundary only rays heading toward the obstacle are blocked.
  std::vector<Obstacle2D> outside;
  std::vector<Point2> toward;
  for (const Obstacle2D& ob : obstacles) {
    if (ob.distance(pos) > inflate) {
      outside.push_back(ob);
      continue;
    }
    Point2 v = ob.nearest_point(pos) - pos;
    if (norm(v) == 0.0) v = ob.center - pos;
    toward.push_back(v);
  }
  const int n = disc.ray_count;
  out.angles.resize(static_cast<std::size_t>(n));
  out.bits.assign(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    const double rel = -0.5 * kPi + kPi * k / (n - 1);
    const double a = s.theta + rel;
    out.angles[static_cast<std::size_t>(k)] = a;
    const Point2 dir{std::cos(a), std::sin(a)};
    bool blocked = std::any_of(toward.begin(), toward.end(), [&](Point2 v) { return dot(dir, v) > 0.0; });
    if (!blocked) {
      const RayHit h = cast_ray(pos, dir, inflate, outside);
      blocked = h.id >= 0 && h.range <= disc.r_s * std::cos(rel);
    }
    if (blocked) out.bits[static_cast<std::size_t>(k)] = 1;
  }
  return out;
}

FreeIntervalSet free_intervals(const BinaryScan& sc) {
  FreeIntervalSet out;
  const std::size_t n = sc.bits.size();
  if (n == 0) return out;
  const double lo_span = sc.theta - 0.5 * kPi;
  const double hi_span = sc.theta + 0.5 * kPi;
  const double half = n > 1 ? 0.5 * kPi / static_cast<double>(n - 1) : 0.5 * kPi;
  for (std::size_t i = 0; i < n; ++i) {
    if (sc.bits[i]) {
      out.m = 1;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && !sc.bits[j + 1]) ++j;
    out.intervals.push_back({std::max(lo_span, sc.angles[i] - half), std::min(hi_span, sc.angles[j] + half)});
    i = j;
  }
  return out;
}

std::vector<int> closeness_order(const FreeIntervalSet& set, double theta) {
  const std::size_t n = set.intervals.size();
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FreeInterval& iv = set.intervals[i];
    dev[i] = iv.contains(theta) ? 0.0
                                : std::min(std::abs(wrap_angle(iv.lo - theta)), std::abs(wrap_angle(iv.hi - theta)));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dev[static_cast<std::size_t>(a)] < dev[static_cast<std::size_t>(b)]; });
  return order;
}

HeadingChoice select_heading_rank(const FreeIntervalSet& set, double theta, int rank) {
  if (set.intervals.empty()) throw NoFreeInterval("no free interval");
  const std::vector<int> order = closeness_order(set, theta);
  HeadingChoice c;
  c.rank = std::clamp(rank, 0, static_cast<int>(order.size()) - 1);
  c.interval = order[static_cast<std::size_t>(c.rank)];
  c.C = set.intervals[static_cast<std::size_t>(c.interval)].mid();
  return c;
}

HeadingChoice select_heading(const FreeIntervalSet& set, double theta, double p, Rng& rng) {
  if (set.intervals.empty()) throw NoFreeInterval("no free interval");
  if (set.intervals.size() == 1) return select_heading_rank(set, theta, 0);
  return select_heading_rank(set, theta, rng.bernoulli(p) ? 0 : 1);
}

double dynamic_control(int m, double theta_target, double C, double theta, double u_M) {
  const double diff = m == 0 ? wrap_angle(theta_target - theta) : wrap_angle(C - theta);
  return u_M * sgn(diff);
}

void DynamicParams::validate() const {
  disc.validate();
  if (!(d_safe > 0.0)) throw std::invalid_argument("d_safe must be positive");
  if (!(scan_margin >= 0.0)) throw std::invalid_argument("scan_margin must be non-negative");
}

DynamicNavigator::DynamicNavigator(DynamicParams params, double u_M, Point2 target)
    : params_(params), u_M_(u_M), target_(target) {
  params_.validate();
}

namespace {

constexpr StateId kIntervalKind = 3;

}  // namespace

DynamicNavigator::Output DynamicNavigator::step(const UnicycleState& s, const std::vector<Obstacle2D>& obstacles,
                                                std::optional<ActionId> decision) {
  Output out;
  FreeIntervalSet set = free_intervals(scan(obstacles, s, params_.disc, params_.d_safe + params_.scan_margin));
  // Boxed in by the margin: fall back to the bare safety growth.
  if (set.m == 1 && set.intervals.empty() && params_.scan_margin > 0.0)
    set = free_intervals(scan(obstacles, s, params_.disc, params_.d_safe));
  const double theta_target = std::atan2(target_.y - s.y, target_.x - s.x);
  out.m = set.m;
  const int count = static_cast<int>(set.intervals.size());

  if (set.m == 0) {
    out.u = dynamic_control(0, theta_target, 0.0, s.theta, u_M_);
    prev_m_ = 0;
    prev_count_ = count;
    committed_.reset();
    return out;
  }
  if (count == 0) {
    out.u = u_M_;
    out.events.push_back("stall: no free interval");
    prev_m_ = 1;
    prev_count_ = 0;
    committed_.reset();
    return out;
  }

  // Interval that still carries the committed heading, if any.
  int tracked = -1;
  if (committed_) {
    const double a = s.theta + wrap_angle(*committed_ - s.theta);
    for (int i = 0; i < count && tracked < 0; ++i)
      if (set.intervals[static_cast<std::size_t>(i)].contains(a)) tracked = i;
  }
  const bool event = prev_m_ == 0 || count != prev_count_ || tracked < 0;

  double C;
  if (event) {
    HeadingChoice choice;
    if (count >= 2) {
      if (!decision) {
        out.needs_decision = true;
        const int rel_bin = bearing_bin(theta_target - s.theta);
        out.request = {kIntervalKind * 1000000 + std::min(count, 9) * 100 + rel_bin, {0, 1}, "interval"};
        return out;
      }
      choice = select_heading_rank(set, s.theta, *decision);
    } else {
      choice = select_heading_rank(set, s.theta, 0);
    }
    C = choice.C;
    out.events.push_back(std::string("interval ") + (choice.rank == 0 ? "closest" : "next-closest") + " of " +
                         std::to_string(count));
  } else {
    C = s.theta + wrap_angle(*committed_ - s.theta);
  }
  out.u = dynamic_control(1, theta_target, C, s.theta, u_M_);
  committed_ = wrap_angle(C);
  prev_m_ = 1;
  prev_count_ = count;
  return out;
}

}  // namespace navkit
