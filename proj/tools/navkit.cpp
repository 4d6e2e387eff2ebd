// navkit command-line driver.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "navkit/coverage.hpp"
#include "navkit/qlearn.hpp"
#include "navkit/render.hpp"
#include "navkit/routing.hpp"
#include "navkit/sim.hpp"
#include "navkit/textio.hpp"

namespace fs = std::filesystem;
using namespace navkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRunFailed = 2;

// Usage or validation problem; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(path.string() + ": cannot write");
  return out;
}

Scenario scenario_from(const std::string& path, std::optional<std::uint64_t> seed) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  if (seed) sc.seed = *seed;
  return sc;
}

QTable qtable_from(const std::string& path) {
  std::istringstream in(slurp(path));
  try {
    return QTable::load(in);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// --- simulate ---------------------------------------------------------------

struct SimulateOpts {
  std::string scenario;
  std::string out;
  std::string qtable;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateOpts& o) {
  const Scenario sc = scenario_from(o.scenario, o.seed);
  if (!sc.has_robot()) throw UsageError(o.scenario + ": scenario has no robot to simulate");
  std::optional<QTable> q;
  if (!o.qtable.empty()) q = qtable_from(o.qtable);
  const SimResult r = run(sc, q ? Policy::greedy(*q) : Policy::random_p(), sc.seed);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "trajectory.csv");
    write_trajectory_csv(f, r.trajectory);
  }
  {
    auto f = open_out(dir / "metrics.txt");
    write_metrics(f, r);
  }
  {
    auto f = open_out(dir / "events.log");
    write_events(f, r);
  }
  std::cout << "outcome " << to_string(r.outcome) << " time " << fixed(r.metrics.completion_time, 3) << " s length "
            << fixed(r.metrics.path_length, 3) << " m min_clearance " << fixed(r.metrics.min_clearance, 4) << " m\n";
  return r.metrics.success ? kExitOk : kExitRunFailed;
}

// --- train ------------------------------------------------------------------

struct TrainOpts {
  std::vector<std::string> scenarios;
  int episodes = 100;
  std::string out;
  std::optional<std::uint64_t> seed;
  double gamma = 0.8;
  double alpha = 1.0;
  double epsilon = 0.4;
};

// Tabular MDP document: {"mdp": {"start", "terminals", "transitions": [[s, a, s', r], ...]}}.
std::optional<TabularEnv> tabular_from(const std::string& text, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;  // reported by the scenario parser
  }
  if (!doc.is_object() || !doc.contains("mdp")) return std::nullopt;
  try {
    const auto& m = doc.at("mdp");
    if (doc.size() != 1) throw UsageError(path + ": an mdp document has no other keys");
    for (auto it = m.begin(); it != m.end(); ++it)
      if (it.key() != "start" && it.key() != "terminals" && it.key() != "transitions")
        throw UsageError(path + ":" + std::to_string(locate_pointer(text, "/mdp/" + it.key())) + ": unknown key '" +
                         it.key() + "'");
    std::map<StateId, std::vector<TabularEnv::Edge>> edges;
    for (const auto& t : m.at("transitions")) {
      if (!t.is_array() || t.size() != 4) throw UsageError(path + ": transitions are [state, action, next, reward]");
      edges[t[0].get<StateId>()].push_back({t[1].get<ActionId>(), t[2].get<StateId>(), t[3].get<double>()});
    }
    return TabularEnv(m.at("start").get<StateId>(), std::move(edges), m.at("terminals").get<std::vector<StateId>>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_train(const TrainOpts& o) {
  if (o.episodes < 0) throw UsageError("--episodes must be non-negative");
  LearnConfig cfg;
  cfg.gamma = o.gamma;
  cfg.alpha = o.alpha;
  cfg.epsilon = o.epsilon;
  cfg.episodes = o.episodes;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<Scenario> scenarios;
  std::optional<TabularEnv> tabular;
  std::uint64_t seed = o.seed.value_or(0);
  for (const std::string& path : o.scenarios) {
    const std::string text = slurp(path);
    if (auto t = tabular_from(text, path)) {
      if (o.scenarios.size() != 1) throw UsageError("an mdp document trains on its own");
      tabular = std::move(t);
      continue;
    }
    Scenario sc = scenario_from(path, o.seed);
    if (sc.controller != ControllerKind::Reactive2D && sc.controller != ControllerKind::Dynamic)
      throw UsageError(path + ": controller has no decision layer to train");
    if (!o.seed && scenarios.empty()) seed = sc.seed;
    scenarios.push_back(std::move(sc));
  }
  Rng rng(seed);
  TrainReport rep;
  if (tabular) {
    rep = train(*tabular, cfg, rng);
  } else {
    SimEnv env(std::move(scenarios));
    rep = train(env, cfg, rng);
  }
  {
    auto f = open_out(o.out);
    rep.q.save(f);
  }
  std::cout << "episode,return,total\n";
  for (std::size_t k = 0; k < rep.returns.size(); ++k)
    std::cout << k << ',' << fixed(rep.returns[k], 6) << ',' << fixed(rep.totals[k], 6) << '\n';
  std::cerr << "entries " << rep.q.size() << " truncated " << rep.truncated << '\n';
  return kExitOk;
}

// --- coverage ---------------------------------------------------------------

struct CoverageOpts {
  std::string terrain;
  double alpha = kPi / 2.0;
  std::string mode = "lattice";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> altitude;
  std::optional<std::size_t> budget;
  double spacing = 1.0;
  double delta = 0.0;
  int trials = 64;
};

int cmd_coverage(const CoverageOpts& o) {
  if (!(o.alpha > 0.0 && o.alpha < kPi)) throw UsageError("--alpha must lie in (0, pi)");
  if (!(o.spacing > 0.0)) throw UsageError("--spacing must be positive");
  if (!(o.delta >= 0.0)) throw UsageError("--delta must be non-negative");
  const Scenario sc = scenario_from(o.terrain, o.seed);
  if (!sc.terrain) throw UsageError(o.terrain + ": no terrain object");
  const Terrain& t = *sc.terrain;
  std::vector<Point3> pts;
  CoverageReport rep;
  if (o.mode == "lattice") {
    WaypointSet ws;
    if (o.altitude) {
      if (!(*o.altitude > 0.0)) throw UsageError("--altitude must be positive");
      ws = lattice_waypoints(t.region, *o.altitude, o.alpha, LatticePlacement{});
      std::cout << "altitude " << fixed(*o.altitude, 3) << '\n';
    } else {
      SweepConfig cfg;
      cfg.z_min = t.z_min;
      cfg.z_max = t.z_max;
      cfg.trials = o.trials;
      cfg.seed = sc.seed;
      cfg.budget = o.budget;
      const AltitudeSweep sw = altitude_sweep(t.region, o.alpha, cfg);
      if (!sw.z_star) throw UsageError("no altitude in [z_min, z_max] meets the budget");
      ws = sw.waypoints;
      std::cout << "altitude " << fixed(*sw.z_star, 3) << '\n';
    }
    pts = ws.points;
    std::vector<Point2> centers;
    for (const Point3& p : pts) centers.push_back(xy(p));
    const double z = pts.empty() ? 0.0 : pts.front().z;
    rep = grid_coverage(t.region, centers, fov_radius(z, o.alpha), o.spacing, Exec::Parallel);
  } else if (o.mode == "artgallery") {
    VantageResult vr;
    try {
      vr = vantage_waypoints_3d(t, o.alpha);
    } catch (const SeparationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRunFailed;
    }
    pts = vr.set.points;
    std::cout << "triangulation_vertices " << vr.triangulation_vertices << " bound " << vr.bound << '\n';
    rep = visibility_coverage(t, pts, o.alpha, o.spacing, Exec::Parallel);
  } else {
    throw UsageError("--mode must be lattice or artgallery");
  }
  {
    auto f = open_out(o.out);
    write_waypoints(f, pts, std::vector<double>(pts.size(), o.delta));
  }
  std::cout << "waypoints " << pts.size() << '\n';
  std::cout << "samples " << rep.samples << '\n';
  std::cout << "uncovered: " << rep.uncovered << '\n';
  return rep.uncovered == 0 ? kExitOk : kExitRunFailed;
}

// --- route ------------------------------------------------------------------

struct RouteOpts {
  std::string waypoints;
  std::string algo;
  std::string out;
  double r_min = 1.0;
  std::optional<std::uint64_t> seed;
};

WaypointFile waypoints_from(const std::string& path) {
  std::istringstream in(slurp(path));
  try {
    return read_waypoints(in);
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Tour plan_route(const std::string& algo, const WaypointFile& wf, double r_min, std::uint64_t seed) {
  std::vector<Point2> plan;
  for (const Point3& p : wf.points) plan.push_back(xy(p));
  if (algo == "alternating") return alternating_tour(etsp_order(plan), plan, r_min);
  if (algo == "spiral") return spiral_tour(plan, r_min);
  if (algo == "csa") return clustered_spiral_alternating(plan, std::nullopt, r_min, seed);
  if (algo == "som") {
    std::vector<double> deltas = wf.deltas;
    Tour extra;
    if (!deltas.empty() && deltas[0] != 0.0) {
      deltas[0] = 0.0;
      extra.notes.push_back("delta of the initial location forced to 0");
    }
    SomParams params;
    params.seed = seed;
    SomReport rep = som_plan(wf.points, deltas, VelocityLimits{}, params);
    for (const std::string& n : extra.notes) rep.tour.notes.push_back(n);
    rep.tour.notes.push_back("epochs " + std::to_string(rep.epochs));
    return rep.tour;
  }
  throw UsageError("--algo must be alternating, spiral, csa or som");
}

int cmd_route(const RouteOpts& o) {
  if (!(o.r_min > 0.0)) throw UsageError("--rmin must be positive");
  static const std::vector<std::string> algos{"alternating", "spiral", "csa", "som"};
  if (std::find(algos.begin(), algos.end(), o.algo) == algos.end())
    throw UsageError("--algo must be alternating, spiral, csa or som");
  const WaypointFile wf = waypoints_from(o.waypoints);
  if (wf.points.size() < 2) throw UsageError(o.waypoints + ": need at least 2 waypoints");
  Tour tour;
  try {
    tour = plan_route(o.algo, wf, o.r_min, o.seed.value_or(1));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  {
    auto f = open_out(o.out);
    write_tour(f, tour);
  }
  std::cout << "algorithm " << tour.algorithm << " length " << fixed(tour.length, 3) << " m est_time "
            << fixed(tour.est_time, 3) << " s sharp_turns " << tour.sharp_turns << '\n';
  return kExitOk;
}

// --- compare ----------------------------------------------------------------

struct CompareOpts {
  std::string waypoints;
  std::vector<std::string> scenarios;
  std::string qtable;
  int seeds = 20;
  double r_min = 1.0;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_compare(const CompareOpts& o) {
  std::ostringstream table;
  if (!o.waypoints.empty()) {
    if (!o.scenarios.empty()) throw UsageError("compare takes --waypoints or --scenario, not both");
    if (!(o.r_min > 0.0)) throw UsageError("--rmin must be positive");
    const WaypointFile wf = waypoints_from(o.waypoints);
    if (wf.points.size() < 3) throw UsageError(o.waypoints + ": need at least 3 waypoints");
    std::vector<Point2> plan;
    for (const Point3& p : wf.points) plan.push_back(xy(p));
    const double etsp = cycle_length(etsp_order(plan), distance_matrix(plan));
    table << "algorithm,length_m,est_time_s,sharp_turns\n";
    table << "etsp," << fixed(etsp, 3) << ",,\n";
    for (const std::string algo : {"alternating", "spiral", "csa", "som"}) {
      const Tour t = plan_route(algo, wf, o.r_min, o.seed.value_or(1));
      table << algo << ',' << fixed(t.length, 3) << ',' << fixed(t.est_time, 3) << ',' << t.sharp_turns << '\n';
    }
  } else {
    if (o.scenarios.empty()) throw UsageError("compare needs --waypoints or --scenario");
    if (o.qtable.empty()) throw UsageError("training missing: compare needs --qtable for the trained policy");
    if (o.seeds < 1) throw UsageError("--seeds must be at least 1");
    const QTable q = qtable_from(o.qtable);
    std::vector<Scenario> scs;
    for (const std::string& p : o.scenarios) scs.push_back(scenario_from(p, std::nullopt));
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < o.seeds; ++k) seeds.push_back(Rng::derive(o.seed.value_or(0), static_cast<std::uint64_t>(k)));
    const auto rows = benchmark(scs, q, seeds, Exec::Parallel);
    table << "scenario,random_p_time_s,trained_time_s,improvement_pct,random_p_success,trained_success,runs\n";
    for (const BenchmarkRow& r : rows)
      table << r.scenario << ',' << fixed(r.baseline_time, 3) << ',' << fixed(r.trained_time, 3) << ','
            << fixed(r.improvement, 2) << ',' << r.baseline_success << ',' << r.trained_success << ',' << r.runs
            << '\n';
  }
  std::cout << table.str();
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    f << table.str();
  }
  return kExitOk;
}

// --- render -----------------------------------------------------------------

struct RenderOpts {
  std::string input;
  std::string out;
  std::string scenario;
};

int cmd_render(const RenderOpts& o) {
  const std::string text = slurp(o.input);
  const std::string first = text.substr(0, text.find('\n'));
  SvgScene scene;
  std::istringstream in(text);
  try {
    if (first == "t,x,y,z,theta,psi,mode,u,d_min") {
      std::vector<Point2> path;
      for (const TrajectorySample& s : read_trajectory_csv(in)) path.push_back(xy(s.p));
      if (!path.empty()) {
        scene.start = path.front();
        scene.paths.push_back(std::move(path));
      }
    } else if (first.rfind("# navkit tour", 0) == 0) {
      const TourFile tf = read_tour(in);
      for (const auto& poly : tf.polylines) {
        std::vector<Point2> path;
        for (const Point3& p : poly) path.push_back(xy(p));
        if (!path.empty()) scene.waypoints.push_back(path.front());
        scene.paths.push_back(std::move(path));
      }
    } else if (first.rfind("x,y", 0) == 0) {
      for (const Point3& p : read_waypoints(in).points) scene.waypoints.push_back(xy(p));
    } else {
      throw UsageError(o.input + ": unknown input format");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(o.input + ": " + e.what());
  }
  if (!o.scenario.empty()) {
    const Scenario sc = scenario_from(o.scenario, std::nullopt);
    if (sc.has_robot()) {
      scene.bounds = std::make_pair(xy(sc.arena.min), xy(sc.arena.max));
      scene.obstacles = sc.world.snapshot(0.0);
      scene.spheres = sc.spheres;
      scene.start = xy(sc.start3d.position);
      scene.target = xy(sc.target);
    }
    if (sc.terrain) {
      scene.region = sc.terrain->region;
      for (const TerrainObstacle& ob : sc.terrain->obstacles) scene.footprints.push_back(ob.bottom);
    }
  }
  auto f = open_out(o.out);
  f << render_svg(scene);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navkit: reactive navigation, coverage and routing toolkit"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Run one scenario and write trajectory, metrics and events");
  c_sim->add_option("--scenario", sim.scenario, "Scenario JSON")->required();
  c_sim->add_option("--out", sim.out, "Output directory")->required();
  c_sim->add_option("--qtable", sim.qtable, "Trained Q-table; greedy policy when given");
  c_sim->add_option("--seed", sim.seed, "Overrides the scenario seed");

  TrainOpts tr;
  auto* c_tr = app.add_subcommand("train", "Train a Q-table and print the return curve");
  c_tr->add_option("--scenario", tr.scenarios, "Scenario JSON (repeatable) or tabular MDP document")->required();
  c_tr->add_option("--episodes", tr.episodes, "Episode count")->required();
  c_tr->add_option("--out", tr.out, "Q-table output file")->required();
  c_tr->add_option("--seed", tr.seed, "Overrides the scenario seed");
  c_tr->add_option("--gamma", tr.gamma, "Discount factor");
  c_tr->add_option("--alpha", tr.alpha, "Learning rate");
  c_tr->add_option("--epsilon", tr.epsilon, "Exploration rate");

  CoverageOpts cov;
  auto* c_cov = app.add_subcommand("coverage", "Generate coverage waypoints and check them");
  c_cov->add_option("--terrain", cov.terrain, "Scenario JSON with a terrain object")->required();
  c_cov->add_option("--alpha", cov.alpha, "Visibility angle in radians")->required();
  c_cov->add_option("--mode", cov.mode, "lattice or artgallery")->required();
  c_cov->add_option("--out", cov.out, "Waypoint CSV output")->required();
  c_cov->add_option("--seed", cov.seed, "Overrides the scenario seed");
  c_cov->add_option("--altitude", cov.altitude, "Fixed lattice altitude instead of a sweep");
  c_cov->add_option("--budget", cov.budget, "Waypoint budget for the altitude sweep");
  c_cov->add_option("--spacing", cov.spacing, "Oracle grid spacing in meters");
  c_cov->add_option("--delta", cov.delta, "Neighbourhood radius written with each waypoint");
  c_cov->add_option("--trials", cov.trials, "Placements per altitude");

  RouteOpts rt;
  auto* c_rt = app.add_subcommand("route", "Plan a closed tour through waypoints");
  c_rt->add_option("--waypoints", rt.waypoints, "Waypoint CSV")->required();
  c_rt->add_option("--algo", rt.algo, "alternating, spiral, csa or som")->required();
  c_rt->add_option("--out", rt.out, "Tour file output")->required();
  c_rt->add_option("--rmin", rt.r_min, "Minimum turning radius for planar tours");
  c_rt->add_option("--seed", rt.seed, "Seed for clustering and the map");

  CompareOpts cmp;
  auto* c_cmp = app.add_subcommand("compare", "Compare tour algorithms or navigation policies");
  c_cmp->add_option("--waypoints", cmp.waypoints, "Waypoint CSV for a tour comparison");
  c_cmp->add_option("--scenario", cmp.scenarios, "Scenario JSON (repeatable) for a policy benchmark");
  c_cmp->add_option("--qtable", cmp.qtable, "Trained Q-table");
  c_cmp->add_option("--seeds", cmp.seeds, "Runs per scenario and policy");
  c_cmp->add_option("--rmin", cmp.r_min, "Minimum turning radius for planar tours");
  c_cmp->add_option("--out", cmp.out, "Also write the table here");
  c_cmp->add_option("--seed", cmp.seed, "Base seed");

  RenderOpts rd;
  auto* c_rd = app.add_subcommand("render", "Render a trajectory, tour or waypoint file to SVG");
  c_rd->add_option("--input", rd.input, "Trajectory CSV, tour file or waypoint CSV")->required();
  c_rd->add_option("--out", rd.out, "SVG output")->required();
  c_rd->add_option("--scenario", rd.scenario, "Scenario JSON for arena, obstacles and terrain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_sim) return cmd_simulate(sim);
    if (*c_tr) return cmd_train(tr);
    if (*c_cov) return cmd_coverage(cov);
    if (*c_rt) return cmd_route(rt);
    if (*c_cmp) return cmd_compare(cmp);
    if (*c_rd) return cmd_render(rd);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailed;
  }
  return kExitUsage;
}
