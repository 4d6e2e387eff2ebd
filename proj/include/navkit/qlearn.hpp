#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "navkit/rng.hpp"

namespace navkit {

using StateId = std::int64_t;
using ActionId = int;

class QTable {
 public:
  double get(StateId s, ActionId a) const;
  void set(StateId s, ActionId a, double v);
  /// Max over the listed actions; 0 for an empty list.
  double max_value(StateId s, std::span<const ActionId> actions) const;
  /// Lowest-id action among the maximizers.
  ActionId greedy(StateId s, std::span<const ActionId> actions) const;

  std::size_t size() const { return values_.size(); }
  const std::map<std::pair<StateId, ActionId>, double>& entries() const { return values_; }

  /// "state_id action_id value" per line, ascending (state, action).
  void save(std::ostream& os) const;
  static QTable load(std::istream& is);

  bool operator==(const QTable& o) const { return values_ == o.values_; }

 private:
  std::map<std::pair<StateId, ActionId>, double> values_;
};

struct RewardSpec {
  double target = 100.0;
  double decision = -1.0;
  double timeout = -50.0;
  double per_second = 0.0;  // optional elapsed-time cost between decisions
};

struct LearnConfig {
  double gamma = 0.8;
  double alpha = 1.0;
  double epsilon = 0.4;
  int episodes = 100;
  int step_cap = 10000;  // decisions per episode

  void validate() const;
};

/// Q(s,a) <- (1-alpha) Q(s,a) + alpha [r + gamma max_a' Q(s',a')]. An empty
/// successor action list marks a terminal successor.
void q_update(QTable& q, StateId s, ActionId a, double r, StateId s_next,
              std::span<const ActionId> next_actions, double gamma, double alpha);

double discounted_return(std::span<const double> rewards, double gamma);

ActionId choose_action(const QTable& q, StateId s, std::span<const ActionId> actions, double epsilon,
                       Rng& rng);

/// Episodic decision process driven by train().
class EpisodicEnv {
 public:
  struct Step {
    StateId next = 0;
    double reward = 0.0;
    bool terminal = false;
  };
  virtual ~EpisodicEnv() = default;
  /// Starts an episode; nullopt when the episode ends before any decision.
  virtual std::optional<StateId> reset(int episode) = 0;
  virtual std::vector<ActionId> actions(StateId s) const = 0;
  virtual Step step(ActionId a) = 0;
};

struct TrainReport {
  QTable q;
  std::vector<double> returns;  // discounted return per episode
  std::vector<double> totals;   // undiscounted reward sum per episode
  int truncated = 0;            // episodes stopped at the step cap
};

TrainReport train(EpisodicEnv& env, const LearnConfig& config, Rng& rng, QTable initial = {});

/// Finite deterministic MDP given as explicit transition lists.
class TabularEnv : public EpisodicEnv {
 public:
  struct Edge {
    ActionId action;
    StateId next;
    double reward;
  };
  TabularEnv(StateId start, std::map<StateId, std::vector<Edge>> edges, std::vector<StateId> terminals);

  std::optional<StateId> reset(int episode) override;
  std::vector<ActionId> actions(StateId s) const override;
  Step step(ActionId a) override;

  const std::map<StateId, std::vector<Edge>>& edges() const { return edges_; }
  bool is_terminal(StateId s) const;

 private:
  StateId start_;
  StateId current_ = 0;
  std::map<StateId, std::vector<Edge>> edges_;
  std::vector<StateId> terminals_;
};

/// Probability of choosing action 0 under the greedy policy (1 or 0), with
/// the mean over all visited states for diagnostics.
struct PolicySummary {
  std::map<StateId, double> p;
  double mean_p = 0.0;
};
PolicySummary summarize_policy(const QTable& q, std::span<const ActionId> actions);

}  // namespace navkit
