#pragma once

#include <concepts>
#include <span>

#include "icem/types.hpp"

namespace icem {

/// Contract the planner needs from a model.
///
/// `step` must be deterministic and must not modify its input; states are
/// values, so a copy is an independent clone. `step` rejects actions outside
/// `action_bounds()` with ValidationError.
template <class E>
concept Environment = requires(const E& env, const typename E::State& s, const Action& a,
                               std::span<const typename E::State> trajectory) {
  { env.initial_state() } -> std::convertible_to<typename E::State>;
  { env.step(s, a) } -> std::convertible_to<typename E::State>;
  { env.reward(s, a, s) } -> std::convertible_to<double>;
  { env.action_bounds() } -> std::convertible_to<ActionBounds>;
  { env.success(s) } -> std::convertible_to<bool>;
  { env.episode_success(trajectory) } -> std::convertible_to<bool>;
};

template <class State>
State clone_state(const State& s) {
  return s;
}

inline void require_in_bounds(const ActionBounds& bounds, const Action& a, const char* env_name) {
  if (!bounds.contains(a)) {
    throw ValidationError(std::string(env_name) + ": action outside bounds");
  }
}

}  // namespace icem
