#pragma once

#include <span>

#include <Eigen/Dense>

#include "icem/envs/environment.hpp"
#include "icem/envs/sparse_goal.hpp"

namespace icem {

/// First-order dynamics: position integrates the action directly.
inline Eigen::Vector2d integrator_step(const Eigen::Vector2d& position, const Eigen::Vector2d& action,
                                       double dt) {
  return position + action * dt;
}

/// 2-D single integrator with the sparse goal reward.
class IntegratorEnv {
 public:
  using State = Eigen::Vector2d;

  struct Params {
    double dt = 0.1;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    Eigen::Vector2d goal = Eigen::Vector2d(3.0, 0.0);
    double radius = 1.0;
  };

  IntegratorEnv() = default;
  explicit IntegratorEnv(Params p) : params_(std::move(p)) {}

  [[nodiscard]] State initial_state() const { return params_.start; }

  [[nodiscard]] State step(const State& s, const Action& a) const {
    require_in_bounds(bounds_, a, "integrator");
    return integrator_step(s, Eigen::Vector2d(a[0], a[1]), params_.dt);
  }

  [[nodiscard]] double reward(const State&, const Action&, const State& next) const {
    return sparse_goal_reward(next, params_.goal, params_.radius);
  }

  [[nodiscard]] const ActionBounds& action_bounds() const { return bounds_; }
  [[nodiscard]] bool success(const State& s) const { return sparse_goal_success(s, params_.goal, params_.radius); }
  [[nodiscard]] bool episode_success(std::span<const State> traj) const {
    return !traj.empty() && success(traj.back());
  }
  [[nodiscard]] const Params& params() const { return params_; }

 private:
  Params params_;
  ActionBounds bounds_ = ActionBounds::symmetric(2, 1.0);
};

}  // namespace icem
