#include "navkit/qlearn.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace navkit {

double QTable::get(StateId s, ActionId a) const {
  auto it = values_.find({s, a});
  return it == values_.end() ? 0.0 : it->second;
}

void QTable::set(StateId s, ActionId a, double v) { values_[{s, a}] = v; }

double QTable::max_value(StateId s, std::span<const ActionId> actions) const {
  if (actions.empty()) return 0.0;
  double best = get(s, actions[0]);
  for (ActionId a : actions.subspan(1)) best = std::max(best, get(s, a));
  return best;
}

ActionId QTable::greedy(StateId s, std::span<const ActionId> actions) const {
  if (actions.empty()) throw std::invalid_argument("greedy: state has no actions");
  ActionId best = actions[0];
  double best_v = get(s, best);
  for (ActionId a : actions.subspan(1)) {
    const double v = get(s, a);
    if (v > best_v || (v == best_v && a < best)) {
      best = a;
      best_v = v;
    }
  }
  return best;
}

void QTable::save(std::ostream& os) const {
  char buf[64];
  for (const auto& [key, v] : values_) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    os << key.first << ' ' << key.second << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
       << '\n';
  }
}

QTable QTable::load(std::istream& is) {
  QTable q;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    StateId s;
    ActionId a;
    std::string vs;
    if (!(ls >> s >> a >> vs)) throw std::runtime_error("qtable line " + std::to_string(lineno) + ": malformed");
    double v = 0.0;
    auto res = std::from_chars(vs.data(), vs.data() + vs.size(), v);
    if (res.ec != std::errc() || res.ptr != vs.data() + vs.size())
      throw std::runtime_error("qtable line " + std::to_string(lineno) + ": bad value");
    q.set(s, a, v);
  }
  return q;
}

void LearnConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0,1]");
  if (episodes < 0) throw std::invalid_argument("episodes must be non-negative");
  if (step_cap <= 0) throw std::invalid_argument("step_cap must be positive");
}

void q_update(QTable& q, StateId s, ActionId a, double r, StateId s_next,
              std::span<const ActionId> next_actions, double gamma, double alpha) {
  const double target = r + gamma * q.max_value(s_next, next_actions);
  q.set(s, a, (1.0 - alpha) * q.get(s, a) + alpha * target);
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double g = 0.0;
  for (std::size_t k = rewards.size(); k-- > 0;) g = rewards[k] + gamma * g;
  return g;
}

ActionId choose_action(const QTable& q, StateId s, std::span<const ActionId> actions, double epsilon,
                       Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("choose_action: state has no actions");
  if (epsilon > 0.0 && rng.uniform() < epsilon) return actions[rng.below(actions.size())];
  return q.greedy(s, actions);
}

TrainReport train(EpisodicEnv& env, const LearnConfig& config, Rng& rng, QTable initial) {
  config.validate();
  TrainReport report;
  report.q = std::move(initial);
  for (int ep = 0; ep < config.episodes; ++ep) {
    std::vector<double> rewards;
    auto start = env.reset(ep);
    if (start) {
      StateId s = *start;
      int steps = 0;
      while (true) {
        const std::vector<ActionId> acts = env.actions(s);
        const ActionId a = choose_action(report.q, s, acts, config.epsilon, rng);
        const EpisodicEnv::Step st = env.step(a);
        rewards.push_back(st.reward);
        const std::vector<ActionId> next_acts = st.terminal ? std::vector<ActionId>{} : env.actions(st.next);
        q_update(report.q, s, a, st.reward, st.next, next_acts, config.gamma, config.alpha);
        if (st.terminal) break;
        s = st.next;
        if (++steps >= config.step_cap) {
          ++report.truncated;
          break;
        }
      }
    }
    report.returns.push_back(discounted_return(rewards, config.gamma));
    report.totals.push_back(std::accumulate(rewards.begin(), rewards.end(), 0.0));
  }
  return report;
}

TabularEnv::TabularEnv(StateId start, std::map<StateId, std::vector<Edge>> edges, std::vector<StateId> terminals)
    : start_(start), current_(start), edges_(std::move(edges)), terminals_(std::move(terminals)) {}

bool TabularEnv::is_terminal(StateId s) const {
  return std::find(terminals_.begin(), terminals_.end(), s) != terminals_.end();
}

std::optional<StateId> TabularEnv::reset(int) {
  current_ = start_;
  if (is_terminal(current_)) return std::nullopt;
  return current_;
}

std::vector<ActionId> TabularEnv::actions(StateId s) const {
  std::vector<ActionId> out;
  auto it = edges_.find(s);
  if (it != edges_.end())
    for (const Edge& e : it->second) out.push_back(e.action);
  return out;
}

EpisodicEnv::Step TabularEnv::step(ActionId a) {
  auto it = edges_.find(current_);
  if (it == edges_.end()) throw std::logic_error("TabularEnv: state has no actions");
  for (const Edge& e : it->second) {
    if (e.action != a) continue;
    current_ = e.next;
    const bool term = is_terminal(current_) || actions(current_).empty();
    return {current_, e.reward, term};
  }
  throw std::invalid_argument("TabularEnv: unknown action");
}

PolicySummary summarize_policy(const QTable& q, std::span<const ActionId> actions) {
  PolicySummary out;
  std::set<StateId> states;
  for (const auto& [key, v] : q.entries()) states.insert(key.first);
  for (StateId s : states) out.p[s] = q.greedy(s, actions) == actions[0] ? 1.0 : 0.0;
  double sum = 0.0;
  for (const auto& [s, p] : out.p) sum += p;
  out.mean_p = out.p.empty() ? 0.0 : sum / static_cast<double>(out.p.size());
  return out;
}

}  // namespace navkit
