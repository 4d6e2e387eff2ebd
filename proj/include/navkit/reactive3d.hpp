#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navkit/vehicle.hpp"
#include "navkit/world.hpp"

namespace navkit {

class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance from the robot to the covering sphere surface; throws when the
/// robot is inside.
double sphere_distance(const Point3& c, const Sphere& sphere);

struct AvoidingPlane {
  Vec3 normal;   // h x v, normalized
  Vec3 lateral;  // v x normal, normalized
};

/// Plane spanned by the heading v and the direction h to the sphere center.
/// A parallel pair is broken by tilting h through 1e-3 rad about a fixed axis.
AvoidingPlane avoiding_plane(const Vec3& v, const Vec3& h);

enum class Mode3D { Pursuit, Avoid };

const char* to_string(Mode3D m);

struct Reactive3DParams {
  double d_safe = 1.0;
  double d_trig = 2.5;      // also the switching constant C
  double l = 0.5;
  double delta = 1.0;       // saturation cap of the sliding term
  double align_tol = 2.0 * kPi / 180.0;
  double sensor_range = 6.0;

  void validate() const;
};

/// Pursuit: rotate v toward H at no more than u_max. Avoid: bang-bang sliding
/// law along the lateral axis. Every output is orthogonal to v.
Vec3 control3d(Mode3D mode, double d, double d_rate, const Reactive3DParams& params, double u_max,
               const Vec3& lateral, int gamma, const Vec3& v, const Vec3& H, double dt);

Mode3D mode_switch3d(Mode3D mode, double d, double d_rate, const Vec3& v, const Vec3& H,
                     const Reactive3DParams& params);

struct NearestSphere {
  int index = -1;
  double distance = kInf;
};

/// Minimum surface distance; ties by obstacle id.
NearestSphere nearest_sphere(const Point3& c, const std::vector<Sphere>& spheres);

/// True when the segment a-b keeps at least `clearance` from every sphere surface.
bool segment_clear(const Point3& a, const Point3& b, const std::vector<Sphere>& spheres, double clearance);

class Reactive3DNavigator {
 public:
  struct Output {
    Vec3 u;
    Mode3D mode = Mode3D::Pursuit;
    double d = kInf;
    std::vector<std::string> events;
  };

  Reactive3DNavigator(Reactive3DParams params, double u_max, double dt, Point3 target);

  Output step(const Vehicle3DState& s, const std::vector<Sphere>& spheres);

  Mode3D mode() const { return mode_; }

 private:
  Reactive3DParams params_;
  double u_max_;
  double dt_;
  Point3 target_;
  Mode3D mode_ = Mode3D::Pursuit;
  int tracked_ = -1;
  std::optional<double> prev_d_;
};

}  // namespace navkit
