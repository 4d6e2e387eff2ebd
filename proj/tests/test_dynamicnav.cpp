#include <gtest/gtest.h>

#include <cmath>

#include "navkit/dynamicnav.hpp"

using namespace navkit;

namespace {

const double kUM = 30.0 * kPi / 180.0;

int zero_runs(const std::vector<std::uint8_t>& bits) {
  int runs = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (!bits[i] && (i == 0 || bits[i - 1])) ++runs;
  return runs;
}

BinaryScan manual_scan(const std::vector<std::uint8_t>& bits, double theta) {
  BinaryScan sc;
  sc.theta = theta;
  sc.bits = bits;
  const int n = static_cast<int>(bits.size());
  for (int k = 0; k < n; ++k) sc.angles.push_back(theta - 0.5 * kPi + kPi * k / (n - 1));
  return sc;
}

}  // namespace

TEST(DynamicNav, EmptyScanIsFree) {
  SensingDisc disc;
  const BinaryScan sc = scan({}, {0, 0, 0.3}, disc);
  ASSERT_EQ(sc.bits.size(), 181u);
  for (auto b : sc.bits) EXPECT_EQ(b, 0);
  const FreeIntervalSet set = free_intervals(sc);
  EXPECT_EQ(set.m, 0);
  ASSERT_EQ(set.intervals.size(), 1u);
  EXPECT_NEAR(set.intervals[0].lo, 0.3 - kPi / 2.0, 1e-12);
  EXPECT_NEAR(set.intervals[0].hi, 0.3 + kPi / 2.0, 1e-12);
}

TEST(DynamicNav, ObstacleAheadSetsCenterBit) {
  SensingDisc disc;
  const BinaryScan sc = scan({Obstacle2D::disc(0, {0.9 * disc.r_s, 0.0}, 0.01)}, {0, 0, 0}, disc);
  EXPECT_EQ(sc.bits[90], 1);
  EXPECT_EQ(sc.bits[0], 0);
  EXPECT_EQ(sc.bits[180], 0);
}

TEST(DynamicNav, ThresholdIsInclusive) {
  SensingDisc disc;
  const double r = disc.r_s;
  const Obstacle2D at = Obstacle2D::polygon(0, {{r, -0.05}, {r + 1.0, -0.05}, {r + 1.0, 0.05}, {r, 0.05}});
  EXPECT_EQ(scan({at}, {0, 0, 0}, disc).bits[90], 1);
  const Obstacle2D beyond = Obstacle2D::polygon(0, {{r + 1e-6, -0.05}, {r + 1.0, -0.05}, {r + 1.0, 0.05}, {r + 1e-6, 0.05}});
  EXPECT_EQ(scan({beyond}, {0, 0, 0}, disc).bits[90], 0);
}

TEST(DynamicNav, ObstaclesOutsideDiscNeverSetBits) {
  SensingDisc disc;
  const std::vector<Obstacle2D> obs{Obstacle2D::disc(0, {3.0, 0.0}, 0.4), Obstacle2D::disc(1, {0.0, 2.8}, 0.2),
                                    Obstacle2D::disc(2, {-1.0, 0.0}, 0.5)};
  for (auto b : scan(obs, {0, 0, 0}, disc).bits) EXPECT_EQ(b, 0);
}

TEST(DynamicNav, CosineThresholdShrinksOffAxis) {
  SensingDisc disc;
  // At 60 degrees off the heading the threshold is r_s / 2.
  const double a = kPi / 3.0;
  const Obstacle2D near = Obstacle2D::disc(0, {1.0 * std::cos(a), 1.0 * std::sin(a)}, 0.01);
  const Obstacle2D far = Obstacle2D::disc(0, {1.5 * std::cos(a), 1.5 * std::sin(a)}, 0.01);
  EXPECT_EQ(scan({near}, {0, 0, 0}, disc).bits[150], 1);
  EXPECT_EQ(scan({far}, {0, 0, 0}, disc).bits[150], 0);
}

TEST(DynamicNav, MiddleBlockGivesTwoIntervals) {
  std::vector<std::uint8_t> bits(181, 0);
  for (int k = 80; k <= 100; ++k) bits[static_cast<std::size_t>(k)] = 1;
  const FreeIntervalSet set = free_intervals(manual_scan(bits, 0.0));
  EXPECT_EQ(set.m, 1);
  ASSERT_EQ(set.intervals.size(), 2u);
  EXPECT_LT(set.intervals[0].hi, set.intervals[1].lo);
}

TEST(DynamicNav, IntervalCountMatchesRunLength) {
  for (int period : {2, 3, 5, 7}) {
    std::vector<std::uint8_t> bits(181, 0);
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = (k / static_cast<std::size_t>(period)) % 2;
    const FreeIntervalSet set = free_intervals(manual_scan(bits, 1.0));
    EXPECT_EQ(static_cast<int>(set.intervals.size()), zero_runs(bits));
    for (const auto& iv : set.intervals) EXPECT_LT(iv.lo, iv.hi);
    for (std::size_t i = 1; i < set.intervals.size(); ++i)
      EXPECT_LE(set.intervals[i - 1].hi, set.intervals[i].lo + 1e-12);
  }
}

TEST(DynamicNav, SingleIntervalMidpoint) {
  FreeIntervalSet set;
  set.m = 1;
  set.intervals = {{0.2, 0.6}};
  Rng rng(1);
  for (double p : {0.0, 0.3, 1.0}) EXPECT_NEAR(select_heading(set, 1.0, p, rng).C, 0.4, 1e-15);
}

TEST(DynamicNav, ClosestIntervalWithCertainty) {
  FreeIntervalSet set;
  set.m = 1;
  set.intervals = {{-1.2, -0.5}, {0.3, 0.9}};
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const HeadingChoice c = select_heading(set, 0.0, 1.0, rng);
    EXPECT_EQ(c.interval, 1);
    EXPECT_NEAR(c.C, 0.6, 1e-15);
  }
  EXPECT_EQ(select_heading_rank(set, 0.0, 1).interval, 0);
  EXPECT_EQ(closeness_order(set, -0.6), (std::vector<int>{0, 1}));
}

TEST(DynamicNav, HalfProbabilityIsBinomial) {
  FreeIntervalSet set;
  set.m = 1;
  set.intervals = {{-1.2, -0.5}, {0.3, 0.9}, {1.0, 1.4}};
  Rng rng(3);
  const int n = 10000;
  int closest = 0, third = 0;
  for (int k = 0; k < n; ++k) {
    const HeadingChoice c = select_heading(set, 0.0, 0.5, rng);
    closest += c.rank == 0;
    third += c.interval == 2;
  }
  EXPECT_LT(std::abs(closest - n / 2.0), 3.0 * std::sqrt(n * 0.25));
  EXPECT_EQ(third, 0);
}

TEST(DynamicNav, NoIntervalThrows) {
  FreeIntervalSet set;
  set.m = 1;
  Rng rng(1);
  EXPECT_THROW(select_heading(set, 0.0, 0.5, rng), NoFreeInterval);
}

TEST(DynamicNav, ControlSigns) {
  EXPECT_EQ(dynamic_control(0, 0.5, 0.0, 0.2, kUM), kUM);
  EXPECT_EQ(dynamic_control(1, 0.0, -0.3, 0.2, kUM), -kUM);
  EXPECT_EQ(dynamic_control(0, 0.2, 5.0, 0.2, kUM), 0.0);
  // Differences wrap before the sign is taken.
  EXPECT_EQ(dynamic_control(0, -3.0, 0.0, 3.0, kUM), kUM);
}

TEST(DynamicNav, NavigatorAsksForRankWithTwoIntervals) {
  DynamicParams params;
  DynamicNavigator nav(params, kUM, {10.0, 0.0});
  const std::vector<Obstacle2D> obs{Obstacle2D::disc(0, {2.4, 0.0}, 0.2)};
  const auto out = nav.step({0, 0, 0}, obs, std::nullopt);
  EXPECT_EQ(out.m, 1);
  ASSERT_TRUE(out.needs_decision);
  EXPECT_EQ(out.request.actions, (std::vector<ActionId>{0, 1}));
  const auto chosen = nav.step({0, 0, 0}, obs, 0);
  EXPECT_FALSE(chosen.needs_decision);
  EXPECT_LE(std::abs(chosen.u), kUM);
}
