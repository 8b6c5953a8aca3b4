#pragma once

#include <span>

#include <Eigen/Dense>

#include "icem/envs/environment.hpp"
#include "icem/envs/sparse_goal.hpp"

namespace icem {

struct PointMassState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();

  bool operator==(const PointMassState&) const = default;
};

/// Semi-implicit Euler: v' = clamp(v + a dt), x' = x + v' dt. The velocity
/// magnitude is limited to max_speed.
inline PointMassState point_mass_step(const PointMassState& s, const Eigen::Vector2d& accel, double dt,
                                      double max_speed) {
  PointMassState next;
  next.velocity = s.velocity + accel * dt;
  const double speed = next.velocity.norm();
  if (speed > max_speed) next.velocity *= max_speed / speed;
  next.position = s.position + next.velocity * dt;
  return next;
}

/// Point mass in the plane that must find a goal it only senses within
/// `radius`. Outside that disc every state earns the same reward.
class PointMassSparseEnv {
 public:
  using State = PointMassState;

  struct Params {
    double dt = 0.1;
    double max_speed = 1.0;
    Eigen::Vector2d goal = Eigen::Vector2d(3.0, 0.0);
    double radius = 1.0;
  };

  PointMassSparseEnv() = default;
  explicit PointMassSparseEnv(Params p) : params_(std::move(p)) {}

  [[nodiscard]] State initial_state() const { return {}; }

  [[nodiscard]] State step(const State& s, const Action& a) const {
    require_in_bounds(bounds_, a, "point_mass_sparse");
    return point_mass_step(s, Eigen::Vector2d(a[0], a[1]), params_.dt, params_.max_speed);
  }

  [[nodiscard]] double reward(const State&, const Action&, const State& next) const {
    return sparse_goal_reward(next.position, params_.goal, params_.radius);
  }

  [[nodiscard]] const ActionBounds& action_bounds() const { return bounds_; }
  [[nodiscard]] bool success(const State& s) const {
    return sparse_goal_success(s.position, params_.goal, params_.radius);
  }
  /// Solved when the final state is within radius/5 of the goal.
  [[nodiscard]] bool episode_success(std::span<const State> traj) const {
    return !traj.empty() && success(traj.back());
  }
  [[nodiscard]] const Params& params() const { return params_; }

 private:
  Params params_;
  ActionBounds bounds_ = ActionBounds::symmetric(2, 1.0);
};

}  // namespace icem
