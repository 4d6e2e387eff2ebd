#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "navkit/coverage.hpp"
#include "navkit/dynamicnav.hpp"
#include "navkit/qlearn.hpp"
#include "navkit/reactive2d.hpp"
#include "navkit/reactive3d.hpp"
#include "navkit/vehicle.hpp"
#include "navkit/world.hpp"

namespace navkit {

inline constexpr double kTargetRadius = 0.2;
inline constexpr int kDefaultStepCap = 10000;

enum class ControllerKind { Reactive2D, Dynamic, Reactive3D, Pursuit };

const char* to_string(ControllerKind k);

struct Arena {
  Point3 min{0.0, 0.0, 0.0};
  Point3 max{0.0, 0.0, 0.0};

  bool contains(const Point3& p, bool planar) const;
};

struct Scenario {
  std::string name;
  bool planar = true;
  Arena arena;
  World2D world;
  std::vector<Sphere> spheres;
  UnicycleState start2d;
  Vehicle3DState start3d;
  Point3 target;
  ControllerKind controller = ControllerKind::Reactive2D;
  ReactiveParams reactive;
  DynamicParams dynamic;
  Reactive3DParams reactive3d;
  RewardSpec rewards;
  double speed = 0.5;              // v in 2D, V in 3D
  double u_max = 60.0 * kPi / 180.0;
  double dt = kDefaultDt;
  int step_cap = kDefaultStepCap;
  double target_radius = kTargetRadius;
  std::uint64_t seed = 0;
  std::optional<Terrain> terrain;  // coverage scenarios

  bool has_robot() const { return has_robot_; }
  void set_has_robot(bool v) { has_robot_ = v; }

  /// Limits handed to the vehicle models.
  VehicleLimits vehicle_limits() const;

  /// Semantic checks; messages name the offending field as a JSON pointer.
  void validate() const;

 private:
  bool has_robot_ = true;
};

/// Validation failure carrying the JSON pointer of the offending value.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string pointer, const std::string& message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Line of the value addressed by a JSON pointer inside a JSON text (1-based;
/// the nearest existing ancestor when the pointer does not resolve).
int locate_pointer(const std::string& text, const std::string& pointer);

/// Parse and validate a scenario document. Errors are reported as
/// "<source>:<line>: <pointer>: <message>" in a std::runtime_error.
Scenario parse_scenario(const std::string& text, const std::string& source = "scenario");
Scenario load_scenario(const std::string& path);

struct TrajectorySample {
  double t = 0.0;
  Point3 p;
  double theta = 0.0;
  double psi = 0.0;
  std::string mode;
  double u = 0.0;      // turn rate (2D) or |u| (3D)
  double d_min = kInf;
};

enum class Outcome { Target, Collision, Timeout };

const char* to_string(Outcome o);

struct Metrics {
  double path_length = 0.0;
  double completion_time = 0.0;
  double min_clearance = kInf;
  int sharp_turns = 0;
  bool success = false;
};

struct SimResult {
  std::vector<TrajectorySample> trajectory;
  std::vector<std::string> events;  // "t=<time> <text>"
  Outcome outcome = Outcome::Timeout;
  int decisions = 0;
  Metrics metrics;
};

/// Heading change above 30 degrees across a 0.5 s window flags a sample; a
/// run of consecutive flagged samples counts as one sharp turn.
inline constexpr double kSharpTurnAngle = 30.0 * kPi / 180.0;
inline constexpr double kSharpTurnWindow = 0.5;

Metrics compute_metrics(const std::vector<TrajectorySample>& traj, double dt, bool success);
int count_sharp_turn_samples(const std::vector<TrajectorySample>& traj, double dt);

/// Source of decisions at the navigators' decision points.
struct Policy {
  enum class Kind { RandomP, Greedy, Fixed };
  Kind kind = Kind::RandomP;
  const QTable* q = nullptr;  // Greedy
  ActionId fixed = 0;         // Fixed
  double epsilon = 0.0;       // Greedy: exploration rate

  static Policy random_p() { return {}; }
  static Policy greedy(const QTable& table) { return {Kind::Greedy, &table, 0, 0.0}; }
  static Policy always(ActionId a) { return {Kind::Fixed, nullptr, a, 0.0}; }
};

/// Stepper that pauses at every decision point. Used directly by training and
/// wrapped by run().
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);

  struct Pause {
    bool finished = false;
    DecisionRequest request;
    double time = 0.0;
  };

  /// Advance until the next decision point or the end of the run. `decision`
  /// answers the request returned by the previous call.
  Pause advance(std::optional<ActionId> decision = std::nullopt);

  bool finished() const { return finished_; }
  double time() const { return t_; }
  const SimResult& result() const { return result_; }
  SimResult take_result();

 private:
  void record(double u, const std::string& mode, double d);
  double clearance() const;
  void finish(Outcome o, const std::string& why);

  const Scenario& sc_;
  std::optional<ReactiveNavigator> nav2d_;
  std::optional<DynamicNavigator> dyn_;
  std::optional<Reactive3DNavigator> nav3d_;
  UnicycleState s2_;
  Vehicle3DState s3_;
  VehicleLimits limits_;
  double t_ = 0.0;
  int steps_ = 0;
  bool finished_ = false;
  bool started_ = false;
  SimResult result_;
};

/// Runs the scenario to completion, answering decisions from the policy. The
/// random-p baseline draws p once per run from the seed and then takes action
/// 0 with probability p.
SimResult run(const Scenario& scenario, const Policy& policy, std::optional<std::uint64_t> seed = std::nullopt);

/// Training environment over a list of scenarios, cycled by episode index.
class SimEnv : public EpisodicEnv {
 public:
  explicit SimEnv(std::vector<Scenario> scenarios);
  std::optional<StateId> reset(int episode) override;
  std::vector<ActionId> actions(StateId s) const override;
  Step step(ActionId a) override;

 private:
  std::vector<Scenario> scenarios_;
  std::size_t current_ = 0;
  std::optional<Simulation> sim_;
  DecisionRequest pending_;
  double last_time_ = 0.0;
};

struct BatchJob {
  const Scenario* scenario = nullptr;
  Policy policy;
  std::uint64_t seed = 0;
};

/// Independent runs, optionally fanned out over OpenMP threads. Results are
/// in job order either way.
std::vector<SimResult> run_batch(const std::vector<BatchJob>& jobs, Exec exec);

struct BenchmarkRow {
  std::string scenario;
  double baseline_time = 0.0;  // randomized p
  double trained_time = 0.0;
  double improvement = 0.0;    // percent
  int baseline_success = 0;
  int trained_success = 0;
  int runs = 0;
};

/// (compared - proposed) / compared * 100.
double improvement_percent(double compared, double proposed);

/// Mean completion time per scenario for both policies over the seeds. Runs
/// that fail count with the time they ended at.
std::vector<BenchmarkRow> benchmark(const std::vector<Scenario>& scenarios, const QTable& trained,
                                    const std::vector<std::uint64_t>& seeds, Exec exec);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& traj);
void write_metrics(std::ostream& os, const SimResult& r);
void write_events(std::ostream& os, const SimResult& r);

/// Parse a trajectory CSV written by write_trajectory_csv.
std::vector<TrajectorySample> read_trajectory_csv(std::istream& is);

}  // namespace navkit
