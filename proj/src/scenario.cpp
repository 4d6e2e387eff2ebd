#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "navkit/sim.hpp"

namespace navkit {

using nlohmann::json;

namespace {

// Minimal scanner over already-valid JSON text, used to map pointers to lines.
struct Locator {
  const std::string& s;
  std::size_t i = 0;
  int line = 1;

  bool at_end() const { return i >= s.size(); }
  void adv() {
    if (s[i] == '\n') ++line;
    ++i;
  }
  void ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s[i]))) adv();
  }
  std::string str() {
    std::string out;
    adv();
    while (!at_end() && s[i] != '"') {
      if (s[i] == '\\') {
        adv();
        if (at_end()) break;
      }
      out += s[i];
      adv();
    }
    if (!at_end()) adv();
    return out;
  }
  void skip() {
    ws();
    if (at_end()) return;
    const char c = s[i];
    if (c == '"') {
      str();
      return;
    }
    if (c == '{' || c == '[') {
      int depth = 0;
      do {
        if (s[i] == '"') {
          str();
          continue;
        }
        if (s[i] == '{' || s[i] == '[') ++depth;
        if (s[i] == '}' || s[i] == ']') --depth;
        adv();
      } while (!at_end() && depth > 0);
      return;
    }
    while (!at_end() && s[i] != ',' && s[i] != '}' && s[i] != ']' && !std::isspace(static_cast<unsigned char>(s[i])))
      adv();
  }
  int find(const std::vector<std::string>& tokens, std::size_t k) {
    ws();
    const int here = line;
    if (k == tokens.size() || at_end()) return here;
    if (s[i] == '{') {
      adv();
      for (;;) {
        ws();
        if (at_end() || s[i] != '"') return here;
        const std::string key = str();
        ws();
        if (!at_end()) adv();  // ':'
        if (key == tokens[k]) return find(tokens, k + 1);
        skip();
        ws();
        if (at_end() || s[i] != ',') return here;
        adv();
      }
    }
    if (s[i] == '[') {
      std::size_t want = 0;
      try {
        want = std::stoul(tokens[k]);
      } catch (const std::exception&) {
        return here;
      }
      adv();
      for (std::size_t n = 0;; ++n) {
        ws();
        if (at_end() || s[i] == ']') return here;
        if (n == want) return find(tokens, k + 1);
        skip();
        ws();
        if (at_end() || s[i] != ',') return here;
        adv();
      }
    }
    return here;
  }
};

std::vector<std::string> split_pointer(const std::string& pointer) {
  std::vector<std::string> out;
  if (pointer.empty()) return out;
  std::size_t pos = 1;
  for (;;) {
    const std::size_t next = pointer.find('/', pos);
    std::string tok = pointer.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    for (std::size_t k = 0; (k = tok.find('~', k)) != std::string::npos; ++k)
      if (k + 1 < tok.size()) tok.replace(k, 2, tok[k + 1] == '1' ? "/" : "~");
    out.push_back(tok);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// Field readers that report the JSON pointer of a bad value.
void allow(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ScenarioError(ptr, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
    if (!known) throw ScenarioError(ptr + "/" + it.key(), "unknown key '" + it.key() + "'");
  }
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ScenarioError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(ptr, "must be finite");
  return v;
}

double opt_number(const json& obj, const char* key, const std::string& ptr, double def) {
  return obj.contains(key) ? number(obj.at(key), ptr + "/" + key) : def;
}

int integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ScenarioError(ptr, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& ptr, std::size_t lo, std::size_t hi) {
  if (!j.is_array() || j.size() < lo || j.size() > hi)
    throw ScenarioError(ptr, lo == hi ? "expected " + std::to_string(lo) + " numbers"
                                      : "expected " + std::to_string(lo) + " to " + std::to_string(hi) + " numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], ptr + "/" + std::to_string(k)));
  return out;
}

Point2 point2(const json& j, const std::string& ptr) {
  const auto v = numbers(j, ptr, 2, 2);
  return {v[0], v[1]};
}

Point3 point3(const json& j, const std::string& ptr) {
  const auto v = numbers(j, ptr, 3, 3);
  return {v[0], v[1], v[2]};
}

Ring ring(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() < 3) throw ScenarioError(ptr, "expected at least 3 points");
  Ring r;
  for (std::size_t k = 0; k < j.size(); ++k) r.push_back(point2(j[k], ptr + "/" + std::to_string(k)));
  return r;
}

template <class F>
auto wrap_invalid(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(ptr, e.what());
  }
}

Obstacle2D shape2d(const json& j, const std::string& ptr, int id, bool relative) {
  allow(j, ptr, {"type", "center", "radius", "points"});
  if (!j.contains("type") || !j.at("type").is_string()) throw ScenarioError(ptr + "/type", "expected \"disc\" or \"polygon\"");
  const std::string type = j.at("type").get<std::string>();
  if (type == "disc") {
    if (!j.contains("radius")) throw ScenarioError(ptr, "disc needs a radius");
    const double r = number(j.at("radius"), ptr + "/radius");
    if (!(r > 0.0)) throw ScenarioError(ptr + "/radius", "must be positive");
    Point2 c{};
    if (j.contains("center")) c = point2(j.at("center"), ptr + "/center");
    else if (!relative) throw ScenarioError(ptr, "disc needs a center");
    return Obstacle2D::disc(id, c, r);
  }
  if (type == "polygon") {
    if (!j.contains("points")) throw ScenarioError(ptr, "polygon needs points");
    Ring r = ring(j.at("points"), ptr + "/points");
    return wrap_invalid(ptr + "/points", [&] { return Obstacle2D::polygon(id, r); });
  }
  throw ScenarioError(ptr + "/type", "expected \"disc\" or \"polygon\", got \"" + type + "\"");
}

Terrain terrain_of(const json& j, const std::string& ptr) {
  allow(j, ptr, {"region", "obstacles", "c", "z_min", "z_max", "c1", "c2"});
  Terrain t;
  if (!j.contains("region")) throw ScenarioError(ptr, "terrain needs a region");
  const json& reg = j.at("region");
  allow(reg, ptr + "/region", {"outer", "holes"});
  if (!reg.contains("outer")) throw ScenarioError(ptr + "/region", "region needs an outer ring");
  Ring outer = ring(reg.at("outer"), ptr + "/region/outer");
  std::vector<Ring> holes;
  if (reg.contains("holes")) {
    const json& hs = reg.at("holes");
    if (!hs.is_array()) throw ScenarioError(ptr + "/region/holes", "expected an array");
    for (std::size_t k = 0; k < hs.size(); ++k) holes.push_back(ring(hs[k], ptr + "/region/holes/" + std::to_string(k)));
  }
  t.region = wrap_invalid(ptr + "/region", [&] { return PolygonWithHoles::make(outer, holes); });
  if (j.contains("obstacles")) {
    const json& os = j.at("obstacles");
    if (!os.is_array()) throw ScenarioError(ptr + "/obstacles", "expected an array");
    for (std::size_t k = 0; k < os.size(); ++k) {
      const std::string op = ptr + "/obstacles/" + std::to_string(k);
      allow(os[k], op, {"bottom", "top", "height"});
      if (!os[k].contains("bottom") || !os[k].contains("height"))
        throw ScenarioError(op, "obstacle needs bottom and height");
      TerrainObstacle o;
      o.bottom = ring(os[k].at("bottom"), op + "/bottom");
      o.top = os[k].contains("top") ? ring(os[k].at("top"), op + "/top") : o.bottom;
      o.height = number(os[k].at("height"), op + "/height");
      if (!(o.height > 0.0)) throw ScenarioError(op + "/height", "must be positive");
      if (signed_area(o.bottom) < 0.0) std::reverse(o.bottom.begin(), o.bottom.end());
      if (signed_area(o.top) < 0.0) std::reverse(o.top.begin(), o.top.end());
      t.obstacles.push_back(std::move(o));
    }
  }
  t.c = opt_number(j, "c", ptr, t.c);
  t.z_min = opt_number(j, "z_min", ptr, t.z_min);
  t.z_max = opt_number(j, "z_max", ptr, t.z_max);
  t.c1 = opt_number(j, "c1", ptr, t.c1);
  t.c2 = opt_number(j, "c2", ptr, t.c2);
  wrap_invalid(ptr, [&] {
    t.validate();
    return 0;
  });
  return t;
}

void controller_of(const json& j, Scenario& sc) {
  const std::string ptr = "/controller";
  allow(j, ptr, {"type", "params", "rewards"});
  if (!j.contains("type") || !j.at("type").is_string())
    throw ScenarioError(ptr + "/type", "expected one of reactive2d, dynamicnav, reactive3d, pursuit");
  const std::string type = j.at("type").get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pp = ptr + "/params";
  if (type == "reactive2d") {
    sc.controller = ControllerKind::Reactive2D;
    allow(params, pp, {"l", "delta", "d_safe", "d_trig", "sensor_range", "sensor_rays", "pass_clearance"});
    ReactiveParams& r = sc.reactive;
    r.l = opt_number(params, "l", pp, r.l);
    r.delta = opt_number(params, "delta", pp, r.delta);
    r.d_safe = opt_number(params, "d_safe", pp, r.d_safe);
    r.d_trig = opt_number(params, "d_trig", pp, r.d_trig);
    r.sensor_range = opt_number(params, "sensor_range", pp, r.sensor_range);
    if (params.contains("sensor_rays")) r.sensor_rays = integer(params.at("sensor_rays"), pp + "/sensor_rays");
    r.pass_clearance = opt_number(params, "pass_clearance", pp, r.pass_clearance);
    wrap_invalid(pp, [&] {
      r.validate();
      return 0;
    });
  } else if (type == "dynamicnav") {
    sc.controller = ControllerKind::Dynamic;
    allow(params, pp, {"r_s", "ray_count", "d_safe", "scan_margin"});
    DynamicParams& d = sc.dynamic;
    d.disc.r_s = opt_number(params, "r_s", pp, d.disc.r_s);
    if (params.contains("ray_count")) d.disc.ray_count = integer(params.at("ray_count"), pp + "/ray_count");
    d.d_safe = opt_number(params, "d_safe", pp, d.d_safe);
    d.scan_margin = opt_number(params, "scan_margin", pp, d.scan_margin);
    wrap_invalid(pp, [&] {
      d.validate();
      return 0;
    });
  } else if (type == "reactive3d") {
    sc.controller = ControllerKind::Reactive3D;
    allow(params, pp, {"d_safe", "d_trig", "l", "delta", "align_tol", "sensor_range"});
    Reactive3DParams& r = sc.reactive3d;
    r.d_safe = opt_number(params, "d_safe", pp, r.d_safe);
    r.d_trig = opt_number(params, "d_trig", pp, r.d_trig);
    r.l = opt_number(params, "l", pp, r.l);
    r.delta = opt_number(params, "delta", pp, r.delta);
    r.align_tol = opt_number(params, "align_tol", pp, r.align_tol);
    r.sensor_range = opt_number(params, "sensor_range", pp, r.sensor_range);
    wrap_invalid(pp, [&] {
      r.validate();
      return 0;
    });
  } else if (type == "pursuit") {
    sc.controller = ControllerKind::Pursuit;
    allow(params, pp, {});
  } else {
    throw ScenarioError(ptr + "/type", "unknown controller \"" + type + "\"");
  }
  if (j.contains("rewards")) {
    const json& rw = j.at("rewards");
    const std::string rp = ptr + "/rewards";
    allow(rw, rp, {"target", "decision", "timeout", "per_second"});
    sc.rewards.target = opt_number(rw, "target", rp, sc.rewards.target);
    sc.rewards.decision = opt_number(rw, "decision", rp, sc.rewards.decision);
    sc.rewards.timeout = opt_number(rw, "timeout", rp, sc.rewards.timeout);
    sc.rewards.per_second = opt_number(rw, "per_second", rp, sc.rewards.per_second);
  }
}

Scenario build(const json& doc) {
  allow(doc, "", {"arena", "obstacles", "moving_obstacles", "robot", "target", "controller", "limits", "dt", "seed",
                  "terrain"});
  Scenario sc;
  if (doc.contains("terrain")) sc.terrain = terrain_of(doc.at("terrain"), "/terrain");
  if (!doc.contains("robot")) {
    if (!sc.terrain) throw ScenarioError("", "scenario needs a robot (or a terrain for coverage)");
    for (const char* k : {"target", "controller", "obstacles", "moving_obstacles"})
      if (doc.contains(k)) throw ScenarioError(std::string("/") + k, "only meaningful with a robot");
    sc.set_has_robot(false);
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) throw ScenarioError("/seed", "expected a non-negative integer");
      sc.seed = doc.at("seed").get<std::uint64_t>();
    }
    return sc;
  }

  if (doc.contains("controller")) controller_of(doc.at("controller"), sc);
  const json& robot = doc.at("robot");
  allow(robot, "/robot", {"position", "heading", "pitch"});
  if (!robot.contains("position")) throw ScenarioError("/robot", "robot needs a position");
  const auto pos = numbers(robot.at("position"), "/robot/position", 2, 3);
  sc.planar = pos.size() == 2;
  if (sc.controller == ControllerKind::Reactive3D && sc.planar)
    throw ScenarioError("/robot/position", "reactive3d needs a 3D position");
  if ((sc.controller == ControllerKind::Reactive2D || sc.controller == ControllerKind::Dynamic) && !sc.planar)
    throw ScenarioError("/robot/position", "planar controllers need a 2D position");
  const double heading = opt_number(robot, "heading", "/robot", 0.0);
  const double pitch = opt_number(robot, "pitch", "/robot", 0.0);
  if (sc.planar && robot.contains("pitch")) throw ScenarioError("/robot/pitch", "pitch needs a 3D position");
  if (!(std::abs(pitch) < kPi / 2.0)) throw ScenarioError("/robot/pitch", "must lie in (-pi/2, pi/2)");
  sc.start2d = {pos[0], pos[1], wrap_angle(heading)};
  sc.start3d.position = {pos[0], pos[1], sc.planar ? 0.0 : pos[2]};
  sc.start3d.heading = heading_vector(heading, pitch);

  if (!doc.contains("target")) throw ScenarioError("", "scenario needs a target");
  const auto tgt = numbers(doc.at("target"), "/target", pos.size(), pos.size());
  sc.target = {tgt[0], tgt[1], sc.planar ? 0.0 : tgt[2]};

  // Vehicle defaults follow the controller family.
  switch (sc.controller) {
    case ControllerKind::Dynamic:
      sc.speed = 0.25;
      sc.u_max = 30.0 * kPi / 180.0;
      break;
    case ControllerKind::Reactive3D:
      sc.speed = 1.0;
      sc.u_max = 1.0;
      break;
    case ControllerKind::Pursuit:
      if (!sc.planar) {
        sc.speed = 1.0;
        sc.u_max = 1.0;
      }
      break;
    case ControllerKind::Reactive2D:
      break;
  }
  if (doc.contains("limits")) {
    const json& l = doc.at("limits");
    allow(l, "/limits", {"speed", "u_max", "step_cap", "target_radius"});
    sc.speed = opt_number(l, "speed", "/limits", sc.speed);
    sc.u_max = opt_number(l, "u_max", "/limits", sc.u_max);
    sc.target_radius = opt_number(l, "target_radius", "/limits", sc.target_radius);
    if (l.contains("step_cap")) sc.step_cap = integer(l.at("step_cap"), "/limits/step_cap");
  }
  sc.dt = doc.contains("dt") ? number(doc.at("dt"), "/dt") : sc.dt;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ScenarioError("/seed", "expected a non-negative integer");
    sc.seed = doc.at("seed").get<std::uint64_t>();
  }

  if (!doc.contains("arena")) throw ScenarioError("", "scenario needs an arena");
  const json& a = doc.at("arena");
  allow(a, "/arena", {"min", "max"});
  if (!a.contains("min") || !a.contains("max")) throw ScenarioError("/arena", "arena needs min and max");
  const auto lo = numbers(a.at("min"), "/arena/min", pos.size(), pos.size());
  const auto hi = numbers(a.at("max"), "/arena/max", pos.size(), pos.size());
  sc.arena.min = {lo[0], lo[1], sc.planar ? 0.0 : lo[2]};
  sc.arena.max = {hi[0], hi[1], sc.planar ? 0.0 : hi[2]};

  if (doc.contains("obstacles")) {
    const json& os = doc.at("obstacles");
    if (!os.is_array()) throw ScenarioError("/obstacles", "expected an array");
    for (std::size_t k = 0; k < os.size(); ++k) {
      const std::string op = "/obstacles/" + std::to_string(k);
      const int id = static_cast<int>(k);
      if (sc.planar) {
        sc.world.statics.push_back(shape2d(os[k], op, id, false));
        continue;
      }
      allow(os[k], op, {"type", "center", "radius"});
      if (!os[k].contains("type") || os[k].at("type") != "sphere")
        throw ScenarioError(op + "/type", "3D scenes take \"sphere\" obstacles");
      if (!os[k].contains("center") || !os[k].contains("radius")) throw ScenarioError(op, "sphere needs center and radius");
      Sphere s;
      s.id = id;
      s.center = point3(os[k].at("center"), op + "/center");
      s.radius = number(os[k].at("radius"), op + "/radius");
      if (!(s.radius > 0.0)) throw ScenarioError(op + "/radius", "must be positive");
      sc.spheres.push_back(s);
    }
  }
  if (doc.contains("moving_obstacles")) {
    const json& ms = doc.at("moving_obstacles");
    if (!ms.is_array()) throw ScenarioError("/moving_obstacles", "expected an array");
    if (!sc.planar && !ms.empty()) throw ScenarioError("/moving_obstacles", "moving obstacles are planar only");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::string mp = "/moving_obstacles/" + std::to_string(k);
      allow(ms[k], mp, {"shape", "path", "speed", "mode"});
      if (!ms[k].contains("shape") || !ms[k].contains("path") || !ms[k].contains("speed"))
        throw ScenarioError(mp, "moving obstacle needs shape, path and speed");
      MovingObstacle m;
      m.shape = shape2d(ms[k].at("shape"), mp + "/shape", 1000 + static_cast<int>(k), true);
      const json& path = ms[k].at("path");
      if (!path.is_array() || path.empty()) throw ScenarioError(mp + "/path", "expected at least one point");
      for (std::size_t p = 0; p < path.size(); ++p) m.path.push_back(point2(path[p], mp + "/path/" + std::to_string(p)));
      m.speed = number(ms[k].at("speed"), mp + "/speed");
      if (ms[k].contains("mode")) {
        const json& mode = ms[k].at("mode");
        if (mode == "loop") m.loop = true;
        else if (mode != "pingpong") throw ScenarioError(mp + "/mode", "expected \"pingpong\" or \"loop\"");
      }
      sc.world.movers.push_back(std::move(m));
    }
  }
  sc.validate();
  return sc;
}

}  // namespace

int locate_pointer(const std::string& text, const std::string& pointer) {
  Locator loc{text};
  return loc.find(split_pointer(pointer), 0);
}

const char* to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::Reactive2D: return "reactive2d";
    case ControllerKind::Dynamic: return "dynamicnav";
    case ControllerKind::Reactive3D: return "reactive3d";
    case ControllerKind::Pursuit: return "pursuit";
  }
  return "?";
}

bool Arena::contains(const Point3& p, bool planar) const {
  const bool in2 = p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  return planar ? in2 : in2 && p.z >= min.z && p.z <= max.z;
}

VehicleLimits Scenario::vehicle_limits() const {
  VehicleLimits l;
  if (planar) {
    l.v = speed;
    l.u_max_2d = u_max;
  } else {
    l.V_min = speed;
    l.V_max = speed;
    l.u_max_3d = u_max;
  }
  return l;
}

void Scenario::validate() const {
  if (!has_robot_) return;
  if (!(dt > 0.0)) throw ScenarioError("/dt", "must be positive");
  if (!(speed > 0.0)) throw ScenarioError("/limits/speed", "must be positive");
  if (!(u_max > 0.0)) throw ScenarioError("/limits/u_max", "must be positive");
  if (step_cap < 1) throw ScenarioError("/limits/step_cap", "must be at least 1");
  if (!(target_radius > 0.0)) throw ScenarioError("/limits/target_radius", "must be positive");
  if (!(arena.min.x < arena.max.x && arena.min.y < arena.max.y && (planar || arena.min.z < arena.max.z)))
    throw ScenarioError("/arena", "min must lie below max on every axis");
  const Point3 start = start3d.position;
  if (!arena.contains(start, planar)) throw ScenarioError("/robot/position", "start lies outside the arena");
  if (!arena.contains(target, planar)) throw ScenarioError("/target", "target lies outside the arena");
  for (std::size_t k = 0; k < world.movers.size(); ++k)
    if (world.movers[k].speed < 0.0 || world.movers[k].speed > speed)
      throw ScenarioError("/moving_obstacles/" + std::to_string(k) + "/speed",
                          "obstacle speed must lie in [0, robot speed]");
  if (planar) {
    for (const Obstacle2D& o : world.statics) {
      const std::string p = "/obstacles/" + std::to_string(o.id);
      if (o.distance(xy(start)) <= 0.0) throw ScenarioError(p, "robot start lies inside this obstacle");
      if (o.distance(xy(target)) <= 0.0) throw ScenarioError(p, "target lies inside this obstacle");
    }
    for (std::size_t k = 0; k < world.movers.size(); ++k)
      if (world.movers[k].at(0.0).distance(xy(start)) <= 0.0)
        throw ScenarioError("/moving_obstacles/" + std::to_string(k), "robot start lies inside this obstacle");
  } else {
    for (const Sphere& s : spheres) {
      const std::string p = "/obstacles/" + std::to_string(s.id);
      if (distance(start, s.center) <= s.radius) throw ScenarioError(p, "robot start lies inside this sphere");
      if (distance(target, s.center) <= s.radius) throw ScenarioError(p, "target lies inside this sphere");
    }
  }
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    throw std::runtime_error(source + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
  try {
    Scenario sc = build(doc);
    return sc;
  } catch (const ScenarioError& e) {
    const std::string ptr = e.pointer().empty() ? "/" : e.pointer();
    throw std::runtime_error(source + ":" + std::to_string(locate_pointer(text, e.pointer())) + ": " + ptr + ": " +
                             e.what());
  } catch (const json::exception& e) {
    throw std::runtime_error(source + ":1: " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  Scenario sc = parse_scenario(ss.str(), path);
  std::string base = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  if (const auto dot = base.rfind('.'); dot != std::string::npos) base.erase(dot);
  sc.name = base;
  return sc;
}

}  // namespace navkit
