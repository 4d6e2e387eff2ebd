#include "navkit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "navkit/textio.hpp"

namespace navkit {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Target: return "target";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

namespace {

// Flags samples whose heading differs from the one a window earlier by at
// least the threshold (inclusive, so a turn held at 60 deg/s counts).
std::vector<bool> sharp_flags(const std::vector<TrajectorySample>& traj, double dt) {
  const auto w = static_cast<std::size_t>(std::max(1L, std::lround(kSharpTurnWindow / dt)));
  std::vector<bool> flags(traj.size(), false);
  for (std::size_t i = w; i < traj.size(); ++i) {
    const Vec3 a = heading_vector(traj[i - w].theta, traj[i - w].psi);
    const Vec3 b = heading_vector(traj[i].theta, traj[i].psi);
    flags[i] = std::acos(std::clamp(dot(a, b), -1.0, 1.0)) >= kSharpTurnAngle - 1e-9;
  }
  return flags;
}

}  // namespace

int count_sharp_turn_samples(const std::vector<TrajectorySample>& traj, double dt) {
  const auto flags = sharp_flags(traj, dt);
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

Metrics compute_metrics(const std::vector<TrajectorySample>& traj, double dt, bool success) {
  if (traj.empty()) throw std::invalid_argument("compute_metrics: empty trajectory");
  if (!(dt > 0.0)) throw std::invalid_argument("compute_metrics: dt must be positive");
  Metrics m;
  m.success = success;
  m.completion_time = traj.back().t;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i > 0) m.path_length += distance(traj[i - 1].p, traj[i].p);
    m.min_clearance = std::min(m.min_clearance, traj[i].d_min);
  }
  bool in_run = false;
  for (bool sharp : sharp_flags(traj, dt)) {
    if (sharp && !in_run) ++m.sharp_turns;
    in_run = sharp;
  }
  return m;
}

Simulation::Simulation(const Scenario& scenario) : sc_(scenario) {
  if (!sc_.has_robot()) throw std::invalid_argument("scenario has no robot to simulate");
  limits_ = sc_.vehicle_limits();
  s2_ = sc_.start2d;
  s3_ = sc_.start3d;
  switch (sc_.controller) {
    case ControllerKind::Reactive2D:
      nav2d_.emplace(sc_.reactive, sc_.speed, sc_.u_max, sc_.dt, xy(sc_.target));
      break;
    case ControllerKind::Dynamic:
      dyn_.emplace(sc_.dynamic, sc_.u_max, xy(sc_.target));
      break;
    case ControllerKind::Reactive3D:
      nav3d_.emplace(sc_.reactive3d, sc_.u_max, sc_.dt, sc_.target);
      break;
    case ControllerKind::Pursuit:
      break;
  }
}

namespace {

// Negative penetration depth when p lies strictly inside an obstacle.
double signed_clearance(Point2 p, const std::vector<Obstacle2D>& obstacles) {
  double depth = 0.0;
  for (const Obstacle2D& o : obstacles) {
    if (!o.contains(p)) continue;
    if (o.is_disc) {
      depth = std::max(depth, o.radius - distance(p, o.center));
    } else {
      double edge = kInf;
      for (std::size_t i = 0; i < o.ring.size(); ++i)
        edge = std::min(edge, distance_to_segment(p, o.ring[i], o.ring[(i + 1) % o.ring.size()]));
      depth = std::max(depth, edge);
    }
  }
  return depth > 0.0 ? -depth : nearest_obstacle(p, obstacles).distance;
}

}  // namespace

double Simulation::clearance() const {
  if (sc_.planar) return signed_clearance({s2_.x, s2_.y}, sc_.world.snapshot(t_));
  return nearest_sphere(s3_.position, sc_.spheres).distance;
}

void Simulation::record(double u, const std::string& mode, double d) {
  TrajectorySample smp;
  smp.t = t_;
  smp.mode = mode;
  smp.u = u;
  smp.d_min = d;
  if (sc_.planar) {
    smp.p = {s2_.x, s2_.y, 0.0};
    smp.theta = s2_.theta;
  } else {
    smp.p = s3_.position;
    heading_angles(s3_.heading, smp.theta, smp.psi);
  }
  result_.trajectory.push_back(std::move(smp));
}

void Simulation::finish(Outcome o, const std::string& why) {
  finished_ = true;
  result_.outcome = o;
  result_.events.push_back("t=" + fixed(t_, 2) + " end " + to_string(o) + (why.empty() ? "" : " " + why));
  result_.metrics = compute_metrics(result_.trajectory, sc_.dt, o == Outcome::Target);
}

SimResult Simulation::take_result() { return std::move(result_); }

Simulation::Pause Simulation::advance(std::optional<ActionId> decision) {
  auto log = [&](const std::string& text) { result_.events.push_back("t=" + fixed(t_, 2) + " " + text); };
  if (!started_) {
    started_ = true;
    log(std::string("start controller=") + to_string(sc_.controller));
  }
  int asks = 0;
  while (!finished_) {
    const double d = clearance();
    const Point3 pos = sc_.planar ? Point3{s2_.x, s2_.y, 0.0} : s3_.position;
    const double to_go = sc_.planar ? distance(xy(pos), xy(sc_.target)) : distance(pos, sc_.target);
    if (d < 0.0) {
      record(0.0, result_.trajectory.empty() ? "-" : result_.trajectory.back().mode, d);
      finish(Outcome::Collision, "clearance " + fixed(d, 4));
      break;
    }
    if (to_go <= sc_.target_radius) {
      record(0.0, result_.trajectory.empty() ? "-" : result_.trajectory.back().mode, d);
      finish(Outcome::Target, "");
      break;
    }
    if (steps_ >= sc_.step_cap) {
      record(0.0, result_.trajectory.empty() ? "-" : result_.trajectory.back().mode, d);
      finish(Outcome::Timeout, "step cap " + std::to_string(sc_.step_cap));
      break;
    }

    double u_rate = 0.0;
    Vec3 u3{};
    std::string mode;
    std::vector<std::string> events;
    switch (sc_.controller) {
      case ControllerKind::Reactive2D: {
        const Sensing2D sensing =
            sense_2d(s2_, sc_.world.snapshot(t_), sc_.reactive.sensor_range, sc_.reactive.sensor_rays);
        auto out = nav2d_->step(s2_, sensing, decision);
        if (out.needs_decision) {
          if (++asks > 4) throw std::logic_error("navigator keeps requesting decisions");
          return {false, out.request, t_};
        }
        u_rate = out.u;
        mode = to_string(nav2d_->mode());
        events = std::move(out.events);
        break;
      }
      case ControllerKind::Dynamic: {
        auto out = dyn_->step(s2_, sc_.world.snapshot(t_), decision);
        if (out.needs_decision) {
          if (++asks > 4) throw std::logic_error("navigator keeps requesting decisions");
          return {false, out.request, t_};
        }
        u_rate = out.u;
        mode = out.m ? "M1" : "M0";
        events = std::move(out.events);
        break;
      }
      case ControllerKind::Reactive3D: {
        auto out = nav3d_->step(s3_, sc_.spheres);
        u3 = out.u;
        mode = to_string(out.mode);
        events = std::move(out.events);
        break;
      }
      case ControllerKind::Pursuit: {
        mode = "P";
        if (sc_.planar) {
          const double bearing = std::atan2(sc_.target.y - s2_.y, sc_.target.x - s2_.x);
          u_rate = std::clamp(wrap_angle(bearing - s2_.theta) / sc_.dt, -sc_.u_max, sc_.u_max);
        } else {
          const Vec3 H = normalized(sc_.target - s3_.position);
          u3 = control3d(Mode3D::Pursuit, kInf, 0.0, sc_.reactive3d, sc_.u_max, {}, 1, s3_.heading, H, sc_.dt);
        }
        break;
      }
    }
    if (decision) {
      ++result_.decisions;
      log("decision " + std::to_string(*decision));
      decision.reset();
    }
    for (const std::string& e : events) log(e);

    record(sc_.planar ? u_rate : norm(u3), mode, d);
    if (sc_.planar) s2_ = step_unicycle(s2_, sc_.speed, u_rate, sc_.dt, sc_.u_max);
    else s3_ = step_3d(s3_, sc_.speed, u3, sc_.dt, limits_);
    ++steps_;
    t_ = steps_ * sc_.dt;
  }
  return {true, {}, t_};
}

namespace {

ActionId decide(const Policy& policy, const DecisionRequest& req, double p, Rng& rng) {
  if (req.actions.empty()) throw std::logic_error("decision request without actions");
  switch (policy.kind) {
    case Policy::Kind::Fixed:
      return std::find(req.actions.begin(), req.actions.end(), policy.fixed) != req.actions.end() ? policy.fixed
                                                                                                 : req.actions.front();
    case Policy::Kind::Greedy:
      return choose_action(*policy.q, req.state, req.actions, policy.epsilon, rng);
    case Policy::Kind::RandomP:
      if (req.actions.size() == 1) return req.actions.front();
      return rng.bernoulli(p) ? req.actions[0] : req.actions[1];
  }
  return req.actions.front();
}

}  // namespace

SimResult run(const Scenario& scenario, const Policy& policy, std::optional<std::uint64_t> seed) {
  const std::uint64_t s = seed.value_or(scenario.seed);
  Rng rng(Rng::derive(s, 0x706f6c6963ULL));
  const double p = rng.uniform();
  Simulation sim(scenario);
  Simulation::Pause pause = sim.advance();
  while (!pause.finished) pause = sim.advance(decide(policy, pause.request, p, rng));
  SimResult r = sim.take_result();
  if (policy.kind == Policy::Kind::RandomP) r.events.insert(r.events.begin(), "t=0.00 policy random-p p=" + fixed(p, 6));
  return r;
}

SimEnv::SimEnv(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
  if (scenarios_.empty()) throw std::invalid_argument("SimEnv: no scenarios");
  for (const Scenario& s : scenarios_)
    if (s.controller != ControllerKind::Reactive2D && s.controller != ControllerKind::Dynamic)
      throw std::invalid_argument("SimEnv: scenario '" + s.name + "' has no decision layer");
}

std::optional<StateId> SimEnv::reset(int episode) {
  current_ = static_cast<std::size_t>(episode) % scenarios_.size();
  sim_.emplace(scenarios_[current_]);
  last_time_ = 0.0;
  const Simulation::Pause pause = sim_->advance();
  if (pause.finished) return std::nullopt;
  pending_ = pause.request;
  last_time_ = pause.time;
  return pending_.state;
}

std::vector<ActionId> SimEnv::actions(StateId s) const {
  if (s == pending_.state) return pending_.actions;
  return {0, 1};
}

EpisodicEnv::Step SimEnv::step(ActionId a) {
  if (!sim_) throw std::logic_error("SimEnv::step before reset");
  const Simulation::Pause pause = sim_->advance(a);
  const RewardSpec& rw = scenarios_[current_].rewards;
  double reward = rw.decision + rw.per_second * (pause.time - last_time_);
  last_time_ = pause.time;
  Step out;
  if (pause.finished) {
    reward += sim_->result().outcome == Outcome::Target ? rw.target : rw.timeout;
    out.terminal = true;
    out.reward = reward;
    return out;
  }
  pending_ = pause.request;
  out.next = pending_.state;
  out.reward = reward;
  return out;
}

std::vector<SimResult> run_batch(const std::vector<BatchJob>& jobs, Exec exec) {
  std::vector<SimResult> out(jobs.size());
  const long n = static_cast<long>(jobs.size());
  if (exec == Exec::Parallel) {
    std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = run(*jobs[static_cast<std::size_t>(i)].scenario,
                                               jobs[static_cast<std::size_t>(i)].policy,
                                               jobs[static_cast<std::size_t>(i)].seed);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
    for (const std::string& e : errors)
      if (!e.empty()) throw std::runtime_error(e);
    return out;
  }
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        run(*jobs[static_cast<std::size_t>(i)].scenario, jobs[static_cast<std::size_t>(i)].policy,
            jobs[static_cast<std::size_t>(i)].seed);
  return out;
}

double improvement_percent(double compared, double proposed) {
  if (!(compared > 0.0)) throw std::invalid_argument("improvement_percent: compared value must be positive");
  return (compared - proposed) / compared * 100.0;
}

std::vector<BenchmarkRow> benchmark(const std::vector<Scenario>& scenarios, const QTable& trained,
                                    const std::vector<std::uint64_t>& seeds, Exec exec) {
  if (seeds.empty()) throw std::invalid_argument("benchmark: no seeds");
  std::vector<BatchJob> jobs;
  for (const Scenario& sc : scenarios)
    for (std::uint64_t s : seeds) {
      jobs.push_back({&sc, Policy::random_p(), s});
      jobs.push_back({&sc, Policy::greedy(trained), s});
    }
  const std::vector<SimResult> res = run_batch(jobs, exec);
  std::vector<BenchmarkRow> rows;
  std::size_t k = 0;
  for (const Scenario& sc : scenarios) {
    BenchmarkRow row;
    row.scenario = sc.name;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const SimResult& b = res[k++];
      const SimResult& t = res[k++];
      row.baseline_time += b.metrics.completion_time;
      row.trained_time += t.metrics.completion_time;
      row.baseline_success += b.metrics.success ? 1 : 0;
      row.trained_success += t.metrics.success ? 1 : 0;
    }
    row.runs = static_cast<int>(seeds.size());
    row.baseline_time /= row.runs;
    row.trained_time /= row.runs;
    row.improvement = improvement_percent(row.baseline_time, row.trained_time);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string num_or_inf(double v, int prec) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fixed(v, prec);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& traj) {
  os << "t,x,y,z,theta,psi,mode,u,d_min\n";
  for (const TrajectorySample& s : traj)
    os << fixed(s.t, 3) << ',' << fixed(s.p.x, 6) << ',' << fixed(s.p.y, 6) << ',' << fixed(s.p.z, 6) << ','
       << fixed(s.theta, 6) << ',' << fixed(s.psi, 6) << ',' << s.mode << ',' << fixed(s.u, 6) << ','
       << num_or_inf(s.d_min, 6) << '\n';
}

void write_metrics(std::ostream& os, const SimResult& r) {
  const Metrics& m = r.metrics;
  os << "outcome: " << to_string(r.outcome) << '\n';
  os << "success: " << (m.success ? 1 : 0) << '\n';
  os << "path_length_m: " << fixed(m.path_length, 6) << '\n';
  os << "completion_time_s: " << fixed(m.completion_time, 3) << '\n';
  os << "min_clearance_m: " << num_or_inf(m.min_clearance, 6) << '\n';
  os << "sharp_turns: " << m.sharp_turns << '\n';
  os << "decisions: " << r.decisions << '\n';
  os << "samples: " << r.trajectory.size() << '\n';
}

void write_events(std::ostream& os, const SimResult& r) {
  for (const std::string& e : r.events) os << e << '\n';
}

std::vector<TrajectorySample> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,x,y,z,theta,psi,mode,u,d_min")
    throw std::runtime_error("trajectory: missing header line");
  std::vector<TrajectorySample> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("trajectory line " + std::to_string(lineno) + ": expected 9 fields");
    auto val = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error("trajectory line " + std::to_string(lineno) + ": bad number '" + s + "'");
      }
    };
    TrajectorySample smp;
    smp.t = val(f[0]);
    smp.p = {val(f[1]), val(f[2]), val(f[3])};
    smp.theta = val(f[4]);
    smp.psi = val(f[5]);
    smp.mode = f[6];
    smp.u = val(f[7]);
    smp.d_min = val(f[8]);
    out.push_back(std::move(smp));
  }
  return out;
}

}  // namespace navkit
