#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

#include "icem/envs/environment.hpp"

namespace icem {

/// Angle 0 is upright; positive angle and velocity share a sign.
struct PendulumState {
  double angle = std::numbers::pi;
  double velocity = 0.0;

  bool operator==(const PendulumState&) const = default;
};

/// Wraps into (-pi, pi].
inline double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

struct PendulumParams {
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.81;
  double dt = 0.05;
  double max_torque = 2.0;
};

/// Frictionless point-mass pendulum, semi-implicit Euler.
inline PendulumState pendulum_step(const PendulumState& s, double torque, const PendulumParams& p = {}) {
  const double accel = p.gravity / p.length * std::sin(s.angle) + torque / (p.mass * p.length * p.length);
  PendulumState next;
  next.velocity = s.velocity + accel * p.dt;
  next.angle = wrap_angle(s.angle + next.velocity * p.dt);
  return next;
}

inline double pendulum_reward(const PendulumState& s, double torque) {
  const double a = wrap_angle(s.angle);
  return -(a * a + 0.1 * s.velocity * s.velocity + 0.001 * torque * torque);
}

/// Kinetic plus potential energy, zero potential at the pivot height.
inline double pendulum_energy(const PendulumState& s, const PendulumParams& p = {}) {
  return 0.5 * p.mass * p.length * p.length * s.velocity * s.velocity +
         p.mass * p.gravity * p.length * std::cos(s.angle);
}

/// Swing-up from hanging rest with a torque limit well below gravity, so the
/// planner has to pump energy over several swings.
class PendulumEnv {
 public:
  using State = PendulumState;

  /// Success: |angle| < 0.2 over the last `hold_steps` states.
  static constexpr double kUprightTolerance = 0.2;
  static constexpr std::size_t kHoldSteps = 10;

  PendulumEnv() = default;
  explicit PendulumEnv(PendulumParams p) : params_(p), bounds_(ActionBounds::symmetric(1, p.max_torque)) {}

  [[nodiscard]] State initial_state() const { return {}; }

  [[nodiscard]] State step(const State& s, const Action& a) const {
    require_in_bounds(bounds_, a, "pendulum");
    return pendulum_step(s, a[0], params_);
  }

  [[nodiscard]] double reward(const State& s, const Action& a, const State&) const {
    return pendulum_reward(s, a[0]);
  }

  [[nodiscard]] const ActionBounds& action_bounds() const { return bounds_; }
  [[nodiscard]] bool success(const State& s) const { return std::abs(wrap_angle(s.angle)) < kUprightTolerance; }
  [[nodiscard]] bool episode_success(std::span<const State> traj) const {
    if (traj.size() < kHoldSteps) return false;
    return std::all_of(traj.end() - kHoldSteps, traj.end(), [&](const State& s) { return success(s); });
  }
  [[nodiscard]] const PendulumParams& params() const { return params_; }

 private:
  PendulumParams params_;
  ActionBounds bounds_ = ActionBounds::symmetric(1, PendulumParams{}.max_torque);
};

}  // namespace icem
