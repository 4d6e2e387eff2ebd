#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "navkit/curves.hpp"
#include "navkit/geometry.hpp"

namespace navkit {

using DistanceMatrix = std::vector<std::vector<double>>;

DistanceMatrix distance_matrix(const std::vector<Point2>& pts);
DistanceMatrix distance_matrix(const std::vector<Point3>& pts);

/// Closed-tour length of a visiting order.
double cycle_length(const std::vector<int>& order, const DistanceMatrix& d);

/// Exact branch and bound for n <= 10, nearest neighbour plus 2-opt above.
/// The order starts at index 0.
std::vector<int> etsp_order(const DistanceMatrix& d);
std::vector<int> etsp_order(const std::vector<Point2>& pts);
std::vector<int> etsp_order(const std::vector<Point3>& pts);

std::vector<int> nearest_neighbor_order(const DistanceMatrix& d);

struct Tour {
  std::string algorithm;
  std::vector<int> order;
  std::vector<Pose2> poses;          // planar tours: pose at each visited point
  std::vector<DubinsPath> edges;     // planar tours: edge k leaves order[k]
  std::vector<bool> straight;        // edge realized as a plain line
  std::optional<CompositeTrajectory> bezier;
  double length = 0.0;
  double est_time = 0.0;
  int sharp_turns = 0;
  std::vector<double> piece_times;
  std::vector<std::string> notes;
};

/// Arc segments turning more than pi/2 count as sharp turns.
int count_sharp_turns(const std::vector<DubinsPath>& edges);

/// Edges 0, 2, 4, ... are straight, the rest are Dubins paths between the
/// imposed headings; with an odd point count the closing edge is a Dubins path too.
Tour alternating_tour(const std::vector<int>& order, const std::vector<Point2>& pts, double r_min);

/// Convex hull layers from the outside in, each entered at its point nearest
/// the previous exit. Headings bisect the incoming and outgoing chords.
std::vector<int> spiral_order(const std::vector<Point2>& pts, std::optional<Point2> entry = std::nullopt);

Tour spiral_tour(const std::vector<Point2>& pts, double r_min);

inline constexpr std::size_t kHeadingCandidates = 16;

/// Dubins realization of a closed visiting order. Each heading is one of
/// kHeadingCandidates rotations of the bisector of the incoming and outgoing
/// legs, chosen to minimize the closed length.
Tour dubins_tour(const std::string& algorithm, const std::vector<int>& order, const std::vector<Point2>& pts,
                 double r_min);

struct KMeansResult {
  std::vector<int> labels;
  std::vector<Point2> centers;
  double inertia = 0.0;
};

/// Lloyd iterations from a k-means++ start drawn from the seeded generator.
KMeansResult kmeans(const std::vector<Point2>& pts, int k, std::uint64_t seed);

/// Gap statistic with B uniform reference sets over the bounding box; the
/// smallest k with gap(k) >= gap(k+1) - s(k+1), capped at k_max.
int gap_statistic_k(const std::vector<Point2>& pts, int k_max, int B, std::uint64_t seed);

/// Spiral inside each cluster, clusters visited in ETSP order of their
/// centroids and joined by Dubins links. Labels are computed when absent.
Tour clustered_spiral_alternating(const std::vector<Point2>& pts, std::optional<std::vector<int>> labels,
                                  double r_min, std::uint64_t seed = 1);

struct VelocityLimits {
  double a_ver = 0.5;
  double v_ver = 0.5;
  double a_hor = 1.2;
  double v_hor = 1.2;

  void validate() const;
};

struct PathSample {
  double s = 0.0;      // arc length
  Vec3 tangent;        // unit
  double kappa = 0.0;  // curvature
};

struct SpeedProfile {
  double time = 0.0;
  std::vector<double> s;
  std::vector<double> v;
  std::vector<double> segment_time;  // time spent between samples k and k+1
};

class InfeasibleCurvature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forward-backward pass with zero speed at both ends. Speed and acceleration
/// caps are split by axis: a_lim(psi) = min(a_hor/|cos psi|, a_ver/|sin psi|),
/// the curvature cap is a_rad = kappa v^2 <= a_lim and the tangential limit
/// is sqrt(a_lim^2 - a_rad^2).
SpeedProfile travel_profile(const std::vector<PathSample>& samples, const VelocityLimits& limits);

std::vector<PathSample> sample_trajectory(const CompositeTrajectory& traj, int samples_per_piece);
std::vector<PathSample> sample_dubins(const std::vector<DubinsPath>& edges, double ds);

double travel_time(const CompositeTrajectory& traj, const VelocityLimits& limits, int samples_per_piece = 96);

/// Time spent on each piece under the whole-trajectory profile.
std::vector<double> piece_times(const CompositeTrajectory& traj, const VelocityLimits& limits,
                                int samples_per_piece = 96);

struct SomParams {
  double mu = 0.5;
  double eta = 0.1;
  int i_max = 100;
  int lio_sweeps = 10;
  int samples_per_piece = 48;
  std::uint64_t seed = 1;
};

struct SomReport {
  Tour tour;
  int epochs = 0;
  bool converged = false;
  std::vector<std::size_t> neuron_counts;  // after every insertion and removal
  std::vector<double> lio_times;           // time after each LIO sweep, starting value first
};

/// Neighbourhood function of the map; d is the ring-index distance.
double som_neighborhood(double sigma, double d, std::size_t M);

/// Point where the segment from nu to p enters the delta-ball of p (nu when
/// already inside).
Point3 alternate_location(const Point3& nu, const Point3& p, double delta);

/// Smooth closed trajectory through the given joint positions in order, with
/// bisector tangents and chord/3 tangent lengths.
CompositeTrajectory initial_trajectory(const std::vector<Point3>& joints);

struct LioParams {
  int sweeps = 10;
  int golden_iters = 24;
  double angle_bound = 30.0 * kPi / 180.0;
  double scale_lo = 0.1;
  double scale_hi = 3.0;
  int samples_per_piece = 48;
};

/// Coordinate descent over heading, pitch and both tangent lengths at each
/// joint. A change is kept only when it strictly lowers the estimated time.
/// `log` receives the starting time and the time after every sweep.
CompositeTrajectory lio_optimize(const CompositeTrajectory& traj, const VelocityLimits& limits,
                                 const LioParams& params, std::vector<double>* log = nullptr);

/// Descent over joint positions kept inside their delta-balls around the
/// waypoints (joint k belongs to waypoints[k]).
CompositeTrajectory relax_in_neighborhoods(const CompositeTrajectory& traj, const std::vector<Point3>& waypoints,
                                           const std::vector<double>& deltas, const VelocityLimits& limits,
                                           const LioParams& params);

/// Self-organizing map planner for the closed tour with neighbourhoods.
/// waypoints[0] is the initial location and must have delta 0.
SomReport som_plan(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                   const VelocityLimits& limits, const SomParams& params);

/// Planner pieces reused by som_plan: the same visit order, fixed joints at
/// alternate locations, LIO and neighbourhood relaxation.
Tour plan_with_order(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                     const std::vector<int>& order, const VelocityLimits& limits, const SomParams& params,
                     std::vector<double>* lio_log = nullptr);

struct PhaseOffset {
  double arc = 0.0;   // m along the tour
  double time = 0.0;  // s along the tour
};

/// k vehicles evenly spaced along one shared tour.
std::vector<PhaseOffset> split_phases(double length, double time, int k);

struct SubsetPlan {
  std::vector<int> members;  // waypoint indices
  Tour tour;
};

/// k-means on plan positions, one planned tour per subset.
std::vector<SubsetPlan> split_subsets(const std::vector<Point3>& waypoints, const std::vector<double>& deltas,
                                      int k, const VelocityLimits& limits, const SomParams& params);

/// Plain-text tour file.
void write_tour(std::ostream& os, const Tour& tour);

struct TourFile {
  std::string algorithm;
  std::vector<int> order;
  std::vector<std::vector<Point3>> polylines;  // one sampled polyline per piece
  double length = 0.0;
  double est_time = 0.0;
};

TourFile read_tour(std::istream& is);

}  // namespace navkit
