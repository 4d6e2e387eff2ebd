#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "navkit/qlearn.hpp"
#include "oracles.hpp"

using namespace navkit;

namespace {

using Edges = std::map<StateId, std::vector<TabularEnv::Edge>>;

Edges chain() { return {{0, {{0, 1, 0.0}}}, {1, {{0, 2, 100.0}, {1, 0, 0.0}}}}; }

struct Grid {
  int w = 5, h = 5;
  std::vector<std::pair<int, int>> walls{{1, 1}, {1, 2}, {1, 3}, {3, 0}, {3, 1}, {3, 3}, {3, 4}};
  std::pair<int, int> start{0, 0}, goal{4, 4};

  StateId id(int x, int y) const { return y * w + x; }

  Edges edges(double reward) const {
    std::set<std::pair<int, int>> blocked(walls.begin(), walls.end());
    Edges e;
    const int dx[] = {1, -1, 0, 0};
    const int dy[] = {0, 0, 1, -1};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (blocked.count({x, y}) || std::make_pair(x, y) == goal) continue;
        for (int a = 0; a < 4; ++a) {
          const int nx = x + dx[a], ny = y + dy[a];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h || blocked.count({nx, ny})) continue;
          const bool hit = std::make_pair(nx, ny) == goal;
          e[id(x, y)].push_back({a, id(nx, ny), hit ? reward : 0.0});
        }
      }
    return e;
  }
};

int greedy_path_length(const QTable& q, const TabularEnv& env, StateId s, StateId goal) {
  int steps = 0;
  while (s != goal && steps < 100) {
    const auto acts = env.actions(s);
    const ActionId a = q.greedy(s, acts);
    for (const auto& e : env.edges().at(s))
      if (e.action == a) s = e.next;
    ++steps;
  }
  return steps;
}

}  // namespace

TEST(QLearn, UpdateWithZeroRateIsNoop) {
  QTable q;
  q.set(0, 0, 3.0);
  const std::vector<ActionId> next{0};
  q_update(q, 0, 0, 50.0, 1, next, 0.8, 0.0);
  EXPECT_EQ(q.get(0, 0), 3.0);
}

TEST(QLearn, UpdateHalfRateTerminal) {
  QTable q;
  q_update(q, 0, 0, 10.0, 1, {}, 0.8, 0.5);
  EXPECT_EQ(q.get(0, 0), 5.0);
}

TEST(QLearn, UpdateIsMonotone) {
  const std::vector<ActionId> next{0};
  QTable a, b;
  a.set(1, 0, 1.0);
  b.set(1, 0, 2.0);
  q_update(a, 0, 0, 1.0, 1, next, 0.8, 0.7);
  q_update(b, 0, 0, 1.0, 1, next, 0.8, 0.7);
  EXPECT_LT(a.get(0, 0), b.get(0, 0));
  QTable c;
  q_update(c, 0, 0, 2.0, 1, next, 0.8, 0.7);
  QTable d;
  q_update(d, 0, 0, 1.0, 1, next, 0.8, 0.7);
  EXPECT_GT(c.get(0, 0), d.get(0, 0));
}

TEST(QLearn, DiscountedReturn) {
  const std::vector<double> r{3.0, 5.0, 7.0};
  EXPECT_EQ(discounted_return(r, 0.0), 3.0);
  EXPECT_EQ(discounted_return(std::vector<double>(10, 1.0), 0.5), 1.998046875);
  EXPECT_EQ(discounted_return({}, 0.9), 0.0);
}

TEST(QLearn, ChooseActionGreedyAndTies) {
  QTable q;
  q.set(0, 0, 1.0);
  q.set(0, 1, 0.0);
  Rng rng(1);
  const std::vector<ActionId> acts{0, 1};
  for (int k = 0; k < 100; ++k) EXPECT_EQ(choose_action(q, 0, acts, 0.0, rng), 0);
  QTable flat;
  const std::vector<ActionId> acts3{2, 5, 7};
  EXPECT_EQ(choose_action(flat, 0, acts3, 0.0, rng), 2);
  EXPECT_THROW(choose_action(flat, 0, {}, 0.0, rng), std::invalid_argument);
}

TEST(QLearn, ChooseActionUniformUnderFullExploration) {
  QTable q;
  q.set(0, 0, 10.0);
  Rng rng(77);
  const std::vector<ActionId> acts{0, 1, 2, 3};
  std::array<int, 4> counts{};
  const int n = 10000;
  for (int k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(choose_action(q, 0, acts, 1.0, rng))];
  double chi2 = 0.0;
  const double expect = n / 4.0;
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) {
    EXPECT_LT(std::abs(c - expect), 3.0 * sigma);
    chi2 += (c - expect) * (c - expect) / expect;
  }
  EXPECT_LT(chi2, 16.27);  // 0.999 quantile, 3 degrees of freedom
}

TEST(QLearn, ChainReachesFixedPoint) {
  TabularEnv env(0, chain(), {2});
  LearnConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 0.8;
  cfg.epsilon = 0.4;
  cfg.episodes = 100;
  Rng rng(3);
  const TrainReport rep = train(env, cfg, rng);
  const auto ref = oracle::value_iteration(chain(), {2}, 0.8);
  EXPECT_EQ(rep.q.get(1, 0), 100.0);
  EXPECT_EQ(rep.q.get(0, 0), 80.0);
  EXPECT_EQ(rep.q.get(1, 0), ref.at({1, 0}));
  EXPECT_EQ(rep.q.get(0, 0), ref.at({0, 0}));
  EXPECT_NEAR(rep.q.get(1, 1), ref.at({1, 1}), 1e-12);
  EXPECT_EQ(rep.returns.size(), 100u);
  EXPECT_EQ(rep.totals.size(), 100u);
}

TEST(QLearn, GridworldGreedyPathIsShortest) {
  const Grid g;
  TabularEnv env(g.id(g.start.first, g.start.second), g.edges(100.0), {g.id(g.goal.first, g.goal.second)});
  LearnConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 0.8;
  cfg.epsilon = 1.0;
  cfg.episodes = 400;
  Rng rng(9);
  const TrainReport rep = train(env, cfg, rng);
  const int bfs = oracle::grid_bfs(g.w, g.h, g.walls, g.start, g.goal);
  ASSERT_GT(bfs, 0);
  EXPECT_EQ(greedy_path_length(rep.q, env, g.id(0, 0), g.id(4, 4)), bfs);

  const auto ref = oracle::value_iteration(env.edges(), {g.id(4, 4)}, 0.8);
  for (const auto& [key, v] : ref) EXPECT_NEAR(rep.q.get(key.first, key.second), v, 1e-9);
}

TEST(QLearn, GreedyPolicyInvariantUnderRewardScaling) {
  const Grid g;
  const auto a = oracle::value_iteration(g.edges(100.0), {g.id(4, 4)}, 0.8);
  const auto b = oracle::value_iteration(g.edges(7.0), {g.id(4, 4)}, 0.8);
  QTable qa, qb;
  for (const auto& [k, v] : a) qa.set(k.first, k.second, v);
  for (const auto& [k, v] : b) qb.set(k.first, k.second, v);
  TabularEnv env(0, g.edges(1.0), {g.id(4, 4)});
  for (const auto& [s, list] : env.edges()) {
    const auto acts = env.actions(s);
    EXPECT_EQ(qa.greedy(s, acts), qb.greedy(s, acts)) << "state " << s;
  }
}

TEST(QLearn, ZeroRewardKeepsZeroTable) {
  const Grid g;
  TabularEnv env(0, g.edges(0.0), {g.id(4, 4)});
  LearnConfig cfg;
  cfg.episodes = 50;
  Rng rng(4);
  const TrainReport rep = train(env, cfg, rng);
  for (const auto& [k, v] : rep.q.entries()) EXPECT_EQ(v, 0.0);
}

TEST(QLearn, StepCapTruncates) {
  // A self loop never reaches a terminal state.
  TabularEnv env(0, {{0, {{0, 0, 0.0}}}}, {});
  LearnConfig cfg;
  cfg.episodes = 3;
  cfg.step_cap = 20;
  Rng rng(4);
  const TrainReport rep = train(env, cfg, rng);
  EXPECT_EQ(rep.truncated, 3);
}

TEST(QLearn, TableRoundTrip) {
  QTable q;
  q.set(3, 1, 0.1);
  q.set(-2, 0, 1.0 / 3.0);
  q.set(1000000, 1, -50.0);
  std::stringstream ss;
  q.save(ss);
  EXPECT_EQ(ss.str().substr(0, 2), "-2");
  const QTable back = QTable::load(ss);
  EXPECT_TRUE(back == q);
}

TEST(QLearn, ConfigValidation) {
  LearnConfig cfg;
  cfg.gamma = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = LearnConfig{};
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
