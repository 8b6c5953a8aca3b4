#pragma once

#include <Eigen/Dense>

namespace icem {

/// -1 outside the sensing radius, -distance/radius inside. Continuous at the
/// boundary and flat (no gradient) everywhere outside.
inline double sparse_goal_reward(const Eigen::Vector2d& position, const Eigen::Vector2d& goal, double radius) {
  const double dist = (position - goal).norm();
  return dist >= radius ? -1.0 : -dist / radius;
}

inline bool sparse_goal_success(const Eigen::Vector2d& position, const Eigen::Vector2d& goal, double radius) {
  return (position - goal).norm() < radius / 5.0;
}

}  // namespace icem
