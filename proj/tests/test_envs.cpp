#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "icem/envs/integrator.hpp"
#include "icem/envs/pendulum.hpp"
#include "icem/envs/point_mass.hpp"
#include "icem/envs/sparse_goal.hpp"
#include "icem/harness/schedule.hpp"
#include "icem/noise.hpp"
#include "icem/planner.hpp"

namespace {

using icem::Action;
using icem::PlannerConfig;
using icem::Variant;

constexpr double kPi = std::numbers::pi;

PlannerConfig scheduled(Variant v, double beta, std::size_t budget) {
  PlannerConfig cfg = PlannerConfig::preset(v, beta);
  const auto s = icem::harness::schedule_for(budget, cfg.optimizer);
  cfg.optimizer.iterations = s.iterations;
  cfg.optimizer.num_samples = s.num_samples;
  return cfg;
}

// Mean final distance from the origin of the integrator driven open loop by
// clipped noise blocks.
double mean_displacement(double beta, int seeds, Eigen::Index steps) {
  const icem::IntegratorEnv env;
  double total = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(seed);
    icem::ActionSequence a = beta == 0.0 ? icem::sample_white(2, steps, rng)
                                         : icem::sample_colored(icem::NoiseSpec{beta, 2, steps}, rng);
    env.action_bounds().clamp(a);
    Eigen::Vector2d x = env.initial_state();
    for (Eigen::Index t = 0; t < steps; ++t) x = env.step(x, a.col(t));
    total += x.norm();
  }
  return total / seeds;
}

}  // namespace

TEST(PointMass, RestWithoutForceStaysPut) {
  icem::PointMassState s;
  s.position = Eigen::Vector2d(0.4, -1.0);
  EXPECT_EQ(icem::point_mass_step(s, Eigen::Vector2d::Zero(), 0.1, 1.0), s);
}

TEST(PointMass, EulerArithmetic) {
  const auto next = icem::point_mass_step({}, Eigen::Vector2d(1.0, 0.0), 0.1, 1.0);
  EXPECT_NEAR(next.velocity.x(), 0.1, 1e-15);
  EXPECT_NEAR(next.position.x(), 0.01, 1e-15);
  EXPECT_EQ(next.velocity.y(), 0.0);
}

TEST(PointMass, SpeedIsCapped) {
  icem::PointMassState s;
  s.velocity = Eigen::Vector2d(0.8, 0.6);
  const auto next = icem::point_mass_step(s, Eigen::Vector2d(1.0, 1.0), 0.1, 1.0);
  EXPECT_NEAR(next.velocity.norm(), 1.0, 1e-12);
}

TEST(PointMass, CloneIsIndependent) {
  const icem::PointMassSparseEnv env;
  icem::PointMassState original;
  original.position = Eigen::Vector2d(1.5, 2.5);
  const icem::PointMassState sentinel = original;
  auto copy = icem::clone_state(original);
  copy = env.step(copy, Action::Constant(2, 1.0));
  copy.position.x() = 99.0;
  EXPECT_EQ(original, sentinel);
}

TEST(PointMass, RejectsOutOfBoundsActions) {
  const icem::PointMassSparseEnv env;
  EXPECT_THROW(static_cast<void>(env.step({}, Action::Constant(2, 1.01))), icem::ValidationError);
  EXPECT_THROW(static_cast<void>(env.step({}, Action::Constant(3, 0.0))), icem::ValidationError);
  EXPECT_NO_THROW(static_cast<void>(env.step({}, Action::Constant(2, -1.0))));
}

TEST(SparseGoal, RewardShape) {
  const Eigen::Vector2d goal(3.0, 0.0);
  EXPECT_EQ(icem::sparse_goal_reward(goal, goal, 1.0), 0.0);
  EXPECT_TRUE(icem::sparse_goal_success(goal, goal, 1.0));
  EXPECT_EQ(icem::sparse_goal_reward(Eigen::Vector2d(-5, 7), goal, 1.0), -1.0);
  EXPECT_EQ(icem::sparse_goal_reward(Eigen::Vector2d(20, 0), goal, 1.0), -1.0);
  EXPECT_EQ(icem::sparse_goal_reward(Eigen::Vector2d(4.0, 0.0), goal, 1.0), -1.0);
  EXPECT_NEAR(icem::sparse_goal_reward(Eigen::Vector2d(4.0 - 1e-12, 0.0), goal, 1.0), -1.0, 1e-11);
  EXPECT_NEAR(icem::sparse_goal_reward(Eigen::Vector2d(3.5, 0.0), goal, 1.0), -0.5, 1e-15);
  EXPECT_FALSE(icem::sparse_goal_success(Eigen::Vector2d(3.2, 0.0), goal, 1.0));
  EXPECT_TRUE(icem::sparse_goal_success(Eigen::Vector2d(3.19, 0.0), goal, 1.0));
}

TEST(Integrator, DirectIntegration) {
  const Eigen::Vector2d next = icem::integrator_step(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.5, -1.0), 0.1);
  EXPECT_NEAR(next.x(), 1.05, 1e-15);
  EXPECT_NEAR(next.y(), 1.9, 1e-15);
  const icem::IntegratorEnv env;
  EXPECT_THROW(static_cast<void>(env.step(env.initial_state(), Action::Constant(2, -1.5))), icem::ValidationError);
}

TEST(Integrator, ColoredNoiseTravelsFurther) {
  const double white = mean_displacement(0.0, 256, 200);
  const double red = mean_displacement(2.0, 256, 200);
  EXPECT_GT(red, white);
  EXPECT_GE(red, 1.5 * white);
}

TEST(Pendulum, Rewards) {
  EXPECT_EQ(icem::pendulum_reward({0.0, 0.0}, 0.0), 0.0);
  EXPECT_NEAR(icem::pendulum_reward({kPi, 0.0}, 0.0), -kPi * kPi, 1e-12);
  EXPECT_NEAR(icem::pendulum_reward({-kPi, 0.0}, 0.0), -kPi * kPi, 1e-12);
  EXPECT_NEAR(icem::pendulum_reward({0.0, 1.0}, 2.0), -(0.1 + 0.004), 1e-15);
}

TEST(Pendulum, AngleWrap) {
  EXPECT_NEAR(icem::wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(icem::wrap_angle(-0.5), -0.5, 1e-15);
  EXPECT_NEAR(icem::wrap_angle(2.0 * kPi + 0.25), 0.25, 1e-12);
  EXPECT_GT(icem::wrap_angle(-kPi), 0.0);
}

TEST(Pendulum, UprightIsAnEquilibrium) {
  const icem::PendulumEnv env;
  const auto s = env.step({0.0, 0.0}, Action::Zero(1));
  EXPECT_EQ(s.angle, 0.0);
  EXPECT_EQ(s.velocity, 0.0);
  EXPECT_THROW(static_cast<void>(env.step({}, Action::Constant(1, 2.5))), icem::ValidationError);
}

TEST(Pendulum, EnergyDriftUnforced) {
  // Net drift over 100 steps, per step, for releases anywhere on the circle.
  for (double start : {kPi - 0.05, kPi - 0.3, 2.5, 1.0, 0.2}) {
    icem::PendulumState s{start, 0.0};
    const double e0 = icem::pendulum_energy(s);
    for (int t = 0; t < 100; ++t) s = icem::pendulum_step(s, 0.0);
    EXPECT_LE(std::abs(icem::pendulum_energy(s) - e0) / std::abs(e0) / 100.0, 1e-2) << "start " << start;
  }
}

TEST(Pendulum, EnergyStepChangeSmallSwings) {
  for (double start : {kPi - 0.05, kPi - 0.3, 2.5}) {
    icem::PendulumState s{start, 0.0};
    const double e0 = icem::pendulum_energy(s);
    double prev = e0;
    for (int t = 0; t < 100; ++t) {
      s = icem::pendulum_step(s, 0.0);
      const double e = icem::pendulum_energy(s);
      EXPECT_LE(std::abs(e - prev) / std::abs(e0), 1e-2) << "start " << start << " step " << t;
      prev = e;
    }
  }
}

TEST(Pendulum, SuccessNeedsAHold) {
  const icem::PendulumEnv env;
  std::vector<icem::PendulumState> traj(20, icem::PendulumState{0.1, 0.0});
  EXPECT_TRUE(env.episode_success(traj));
  traj[12].angle = 0.3;
  EXPECT_FALSE(env.episode_success(traj));
  traj.resize(5);
  EXPECT_FALSE(env.episode_success(traj));
}

TEST(Pendulum, SwingUpSolvedByIcem) {
  const icem::PendulumEnv env;
  const PlannerConfig cfg = scheduled(Variant::icem, 2.0, 300);
  int solved = 0;
  for (int seed = 0; seed < 50; ++seed) solved += icem::run_episode(env, cfg, 150, seed).success ? 1 : 0;
  EXPECT_GE(solved / 50.0, 0.9);
}

TEST(PointMass, GoalReachedByIcem) {
  const icem::PointMassSparseEnv env;
  const PlannerConfig cfg = scheduled(Variant::icem, 2.5, 100);
  int solved = 0;
  for (int seed = 0; seed < 20; ++seed) solved += icem::run_episode(env, cfg, 50, seed).success ? 1 : 0;
  EXPECT_GE(solved, 15);
}
