#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "navkit/curves.hpp"
#include "navkit/rng.hpp"
#include "oracles.hpp"

using namespace navkit;

namespace {

Pose2 random_pose(Rng& rng, double half) {
  return {rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-kPi, kPi)};
}

DubinsWord mirror(DubinsWord w) {
  switch (w) {
    case DubinsWord::LSL: return DubinsWord::RSR;
    case DubinsWord::LSR: return DubinsWord::RSL;
    case DubinsWord::RSL: return DubinsWord::LSR;
    case DubinsWord::RSR: return DubinsWord::LSL;
    case DubinsWord::RLR: return DubinsWord::LRL;
    case DubinsWord::LRL: return DubinsWord::RLR;
  }
  return w;
}

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST(Curves, BernsteinValues) {
  EXPECT_DOUBLE_EQ(bernstein(0, 3, 0.0), 1.0);
  double sum = 0.0;
  for (int i = 0; i <= 3; ++i) sum += bernstein(i, 3, 0.37);
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(bernstein(1, 3, 0.5), 3.0 * 0.5 * 0.25, 1e-15);
  EXPECT_THROW(bernstein(4, 3, 0.5), std::invalid_argument);
}

TEST(Curves, BezierEndpointsAndMidpoint) {
  CubicBezier c{{Point3{0, 0, 0}, Point3{0, 3, 0}, Point3{3, 3, 0}, Point3{3, 0, 0}}};
  EXPECT_EQ(bezier_eval(c, 0.0), c.p[0]);
  EXPECT_EQ(bezier_eval(c, 1.0), c.p[3]);
  const Point3 mid = bezier_eval(c, 0.5);
  const Point3 ref = oracle::de_casteljau(c, 0.5);
  EXPECT_NEAR(mid.x, 1.5, 1e-12);
  EXPECT_NEAR(mid.y, 2.25, 1e-12);
  EXPECT_NEAR(distance(mid, ref), 0.0, 1e-12);
  EXPECT_THROW(bezier_eval(c, 1.5), std::invalid_argument);
}

TEST(Curves, BezierMatchesDeCasteljau) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    CubicBezier c;
    for (auto& p : c.p) p = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double t = rng.uniform();
    EXPECT_LE(distance(bezier_eval(c, t), oracle::de_casteljau(c, t)), 1e-12);
  }
}

TEST(Curves, DubinsStraightLine) {
  const DubinsPath p = dubins_shortest({0, 0, 0}, {10, 0, 0}, 1.0);
  EXPECT_NEAR(p.length(), 10.0, 1e-12);
  EXPECT_NEAR(p.params[0], 0.0, 1e-12);
  EXPECT_NEAR(p.params[2], 0.0, 1e-12);
}

TEST(Curves, DubinsHalfCircle) {
  const Pose2 a{0, 0, 0}, b{0, 2, kPi};
  const DubinsPath p = dubins_shortest(a, b, 1.0);
  EXPECT_NEAR(p.length(), kPi, 1e-9);
  EXPECT_NEAR(oracle::dubins_brute(a, b, 1.0).length, kPi, 1e-6);
}

TEST(Curves, DubinsMirrorSymmetry) {
  Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const Pose2 a = random_pose(rng, 4.0), b = random_pose(rng, 4.0);
    const DubinsPath p = dubins_shortest(a, b, 1.0);
    const DubinsPath q = dubins_shortest({a.x, -a.y, -a.theta}, {b.x, -b.y, -b.theta}, 1.0);
    EXPECT_NEAR(p.length(), q.length(), 1e-9);
    EXPECT_EQ(mirror(p.word), q.word);
  }
}

TEST(Curves, DubinsMatchesBruteForce) {
  Rng rng(2024);
  std::set<DubinsWord> seen;
  for (int k = 0; k < 200; ++k) {
    const Pose2 a = random_pose(rng, 3.0), b = random_pose(rng, 3.0);
    const DubinsPath p = dubins_shortest(a, b, 1.0);
    const oracle::DubinsBest ref = oracle::dubins_brute(a, b, 1.0);
    EXPECT_NEAR(p.length(), ref.length, 1e-3) << "pair " << k;
    EXPECT_GE(p.length() + 1e-12, std::hypot(b.x - a.x, b.y - a.y));
    const Pose2 end = p.end();
    EXPECT_LE(std::hypot(end.x - b.x, end.y - b.y), 1e-6);
    EXPECT_LE(angle_gap(end.theta, b.theta), 1e-6);
    seen.insert(p.word);
  }
  EXPECT_GE(seen.size(), 4u);
}

TEST(Curves, DubinsTriangleInequality) {
  Rng rng(99);
  for (int k = 0; k < 300; ++k) {
    const Pose2 a = random_pose(rng, 5.0), b = random_pose(rng, 5.0), c = random_pose(rng, 5.0);
    const double ac = dubins_shortest(a, c, 0.7).length();
    const double ab = dubins_shortest(a, b, 0.7).length();
    const double bc = dubins_shortest(b, c, 0.7).length();
    EXPECT_LE(ac, ab + bc + 1e-9);
  }
}

TEST(Curves, DubinsDegenerateIsZeroLength) {
  const DubinsPath p = dubins_shortest({1, 2, 0.3}, {1, 2, 0.3}, 1.0);
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.length(), 0.0);
}

TEST(Curves, DubinsRejectsBadRadius) { EXPECT_THROW(dubins_shortest({0, 0, 0}, {1, 0, 0}, 0.0), std::invalid_argument); }

TEST(Curves, StitchCollinearIsStraight) {
  std::vector<Joint> joints{{{0, 0, 0}, 0, 0}, {{3, 0, 0}, 0, 0}, {{6, 0, 0}, 0, 0}};
  const auto traj = stitch_smooth(joints, {{1, 1}, {1, 1}}, false);
  ASSERT_EQ(traj.pieces.size(), 2u);
  for (const auto& piece : traj.pieces)
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
      const Vec3 d = piece.derivative(t);
      EXPECT_NEAR(d.x, 3.0, 1e-12);
      EXPECT_NEAR(d.y, 0.0, 1e-12);
      EXPECT_NEAR(piece.eval(t).y, 0.0, 1e-12);
    }
}

namespace {

// Second-order one-sided difference quotients at the ends of a piece.
Vec3 fd_start(const CubicBezier& c, double h) {
  return (c.eval(0.0) * -3.0 + c.eval(h) * 4.0 - c.eval(2.0 * h)) / (2.0 * h);
}
Vec3 fd_end(const CubicBezier& c, double h) {
  return (c.eval(1.0) * 3.0 - c.eval(1.0 - h) * 4.0 + c.eval(1.0 - 2.0 * h)) / (2.0 * h);
}

std::vector<Joint> random_joints(Rng& rng, int n) {
  std::vector<Joint> joints;
  for (int i = 0; i < n; ++i)
    joints.push_back({{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 5)}, rng.uniform(-kPi, kPi),
                      rng.uniform(-0.5, 0.5)});
  return joints;
}

}  // namespace

TEST(Curves, StitchRandomLoopIsTangentContinuous) {
  Rng rng(31);
  auto joints = random_joints(rng, 5);
  std::vector<double> l;
  for (int i = 0; i < 5; ++i) l.push_back(rng.uniform(0.5, 3.0));
  std::vector<TangentLengths> tangents;
  for (int i = 0; i < 5; ++i) tangents.push_back({l[static_cast<std::size_t>(i)], l[static_cast<std::size_t>((i + 1) % 5)]});
  const auto traj = stitch_smooth(joints, tangents, true);
  ASSERT_EQ(traj.pieces.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& a = traj.pieces[i];
    const auto& b = traj.pieces[(i + 1) % 5];
    EXPECT_LE(distance(a.eval(1.0), b.eval(0.0)), 1e-12);
    EXPECT_LE(norm(fd_end(a, 1e-4) - fd_start(b, 1e-4)), 1e-6);
  }
  const auto res = smoothness_residual(traj);
  EXPECT_LT(res.position, 1e-9);
  EXPECT_LT(res.proportional, 1e-9);
}

TEST(Curves, StitchClosedBySeam) {
  Rng rng(32);
  auto joints = random_joints(rng, 4);
  joints.push_back(joints.front());
  std::vector<TangentLengths> tangents(4, {1.5, 1.5});
  const auto traj = stitch_smooth(joints, tangents, false);
  EXPECT_TRUE(traj.closed);
  ASSERT_EQ(traj.pieces.size(), 4u);
  EXPECT_LE(distance(traj.pieces.back().eval(1.0), traj.pieces.front().eval(0.0)), 1e-12);
  EXPECT_LE(norm(fd_end(traj.pieces.back(), 1e-4) - fd_start(traj.pieces.front(), 1e-4)), 1e-6);
}

TEST(Curves, StitchRejectsZeroInteriorTangent) {
  std::vector<Joint> joints{{{0, 0, 0}, 0, 0}, {{3, 0, 0}, 0, 0}, {{6, 1, 0}, 0, 0}};
  EXPECT_THROW(stitch_smooth(joints, {{1, 0}, {1, 1}}, false), std::invalid_argument);
}
