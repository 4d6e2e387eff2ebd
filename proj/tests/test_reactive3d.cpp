#include <gtest/gtest.h>

#include <cmath>

#include "navkit/reactive3d.hpp"
#include "navkit/rng.hpp"

using namespace navkit;

namespace {

// Minimum distance to points spread over the sphere by a Fibonacci lattice.
double sampled_surface_distance(const Point3& c, const Sphere& s, int n) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  double best = kInf;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double a = golden * i;
    const Point3 p = s.center + Vec3{r * std::cos(a), r * std::sin(a), z} * s.radius;
    best = std::min(best, distance(c, p));
  }
  return best;
}

Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = norm(v);
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

}  // namespace

TEST(Reactive3D, SphereDistance) {
  const Sphere s{0, {0, 0, 0}, 2.0};
  EXPECT_NEAR(sphere_distance({5, 0, 0}, s), 3.0, 1e-15);
  EXPECT_NEAR(sphere_distance({0, 2, 0}, s), 0.0, 1e-15);
  EXPECT_THROW(sphere_distance({0.5, 0, 0}, s), CollisionError);
}

TEST(Reactive3D, SphereDistanceMatchesSurfaceSampling) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const Sphere s{k, {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.5, 1.5)};
    const Point3 c = s.center + random_unit(rng) * (s.radius + rng.uniform(1.0, 5.0));
    EXPECT_NEAR(sphere_distance(c, s), sampled_surface_distance(c, s, 10000), 1e-3);
  }
}

TEST(Reactive3D, AvoidingPlaneExample) {
  const AvoidingPlane p = avoiding_plane({1, 0, 0}, {0, 1, 0});
  EXPECT_NEAR(distance(p.normal, Vec3{0, 0, -1}), 0.0, 1e-15);
  EXPECT_NEAR(distance(p.lateral, Vec3{0, 1, 0}), 0.0, 1e-15);
}

TEST(Reactive3D, AvoidingPlaneProperties) {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 v = random_unit(rng), h = random_unit(rng);
    const AvoidingPlane p = avoiding_plane(v, h);
    EXPECT_NEAR(dot(p.lateral, v), 0.0, 1e-12);
    EXPECT_NEAR(dot(p.normal, v), 0.0, 1e-12);
    EXPECT_NEAR(norm(p.normal), 1.0, 1e-9);
    EXPECT_NEAR(norm(p.lateral), 1.0, 1e-9);
    const AvoidingPlane q = avoiding_plane(v, -h);
    EXPECT_NEAR(distance(q.normal, -p.normal), 0.0, 1e-9);
    EXPECT_NEAR(distance(q.lateral, -p.lateral), 0.0, 1e-9);
  }
}

TEST(Reactive3D, AvoidingPlaneParallelInputs) {
  const AvoidingPlane p = avoiding_plane({1, 0, 0}, {1, 0, 0});
  EXPECT_NEAR(norm(p.normal), 1.0, 1e-9);
  EXPECT_NEAR(dot(p.lateral, Vec3{1, 0, 0}), 0.0, 1e-12);
}

TEST(Reactive3D, AvoidControlCases) {
  Reactive3DParams params;
  const Vec3 v{1, 0, 0}, i{0, 1, 0}, H{1, 0, 0};
  const double u_max = 1.0;
  EXPECT_EQ(norm(control3d(Mode3D::Avoid, params.d_safe, 0.0, params, u_max, i, 1, v, H, 0.1)), 0.0);
  const Vec3 u = control3d(Mode3D::Avoid, params.d_safe - 0.3, 0.0, params, u_max, i, 1, v, H, 0.1);
  EXPECT_NEAR(distance(u, i * -u_max), 0.0, 1e-15);
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    const double m = norm(control3d(Mode3D::Avoid, rng.uniform(0.0, 4.0), rng.uniform(-1, 1), params, u_max, i,
                                    rng.bernoulli(0.5) ? 1 : -1, v, H, 0.1));
    EXPECT_TRUE(m == 0.0 || std::abs(m - u_max) < 1e-15);
  }
}

TEST(Reactive3D, PursuitControlIsOrthogonalAndBounded) {
  Reactive3DParams params;
  Rng rng(6);
  for (int k = 0; k < 2000; ++k) {
    const Vec3 v = random_unit(rng), H = random_unit(rng);
    const AvoidingPlane p = avoiding_plane(v, H);
    for (Mode3D m : {Mode3D::Pursuit, Mode3D::Avoid}) {
      const Vec3 u = control3d(m, rng.uniform(0, 3), rng.uniform(-1, 1), params, 1.0, p.lateral, 1, v, H, 0.1);
      EXPECT_LE(norm(u), 1.0 + 1e-12);
      EXPECT_LT(std::abs(dot(u, v)), 1e-9);
    }
  }
  EXPECT_EQ(norm(control3d(Mode3D::Pursuit, 5, 0, params, 1.0, {0, 1, 0}, 1, {1, 0, 0}, {1, 0, 0}, 0.1)), 0.0);
}

TEST(Reactive3D, ModeSwitching) {
  Reactive3DParams params;
  const Vec3 v{1, 0, 0};
  EXPECT_EQ(mode_switch3d(Mode3D::Pursuit, params.d_trig, -0.1, v, v, params), Mode3D::Avoid);
  EXPECT_EQ(mode_switch3d(Mode3D::Pursuit, params.d_trig - 0.5, 0.2, v, v, params), Mode3D::Pursuit);
  const Vec3 near_h = heading_vector(1.5 * kPi / 180.0, 0.0);
  const Vec3 off_h = heading_vector(3.0 * kPi / 180.0, 0.0);
  EXPECT_EQ(mode_switch3d(Mode3D::Avoid, params.d_trig - 0.1, 0.0, v, near_h, params), Mode3D::Pursuit);
  EXPECT_EQ(mode_switch3d(Mode3D::Avoid, params.d_trig - 0.1, 0.0, v, off_h, params), Mode3D::Avoid);
}

TEST(Reactive3D, AvoidStepStaysInPlane) {
  VehicleLimits lim;
  lim.u_max_3d = 1.0;
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Vec3 v = random_unit(rng), h = random_unit(rng);
    const AvoidingPlane p = avoiding_plane(v, h);
    const Vehicle3DState s{{0, 0, 0}, v};
    const Vehicle3DState n = step_3d(s, 1.0, p.lateral * (rng.bernoulli(0.5) ? 1.0 : -1.0), 0.1, lim);
    EXPECT_LT(std::abs(dot(n.position - s.position, p.normal)), 1e-6);
  }
}

TEST(Reactive3D, NearestSphereTieGoesToLowerId) {
  const std::vector<Sphere> spheres{{5, {3, 0, 0}, 1.0}, {2, {-3, 0, 0}, 1.0}};
  const NearestSphere ns = nearest_sphere({0, 0, 0}, spheres);
  EXPECT_EQ(ns.index, 1);
  EXPECT_NEAR(ns.distance, 2.0, 1e-15);
}
