#pragma once

// Receding-horizon loop around run_optimization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icem/envs/environment.hpp"
#include "icem/noise.hpp"
#include "icem/optimizer.hpp"
#include "icem/types.hpp"

namespace icem {

enum class Variant { icem, cem, cem_mpc, cem_pets };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::icem: return "icem";
    case Variant::cem: return "cem";
    case Variant::cem_mpc: return "cem_mpc";
    case Variant::cem_pets: return "cem_pets";
  }
  return "?";
}

inline Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::icem, Variant::cem, Variant::cem_mpc, Variant::cem_pets}) {
    if (to_string(v) == name) return v;
  }
  throw ValidationError("unknown variant '" + std::string(name) + "' (expected icem, cem, cem_mpc, cem_pets)");
}

struct PlannerConfig {
  OptimizerConfig optimizer;
  Eigen::Index horizon = 30;
  /// Warm-start each step from the previous mean shifted by one timestep.
  bool shift_initialization = true;

  void validate() const {
    optimizer.validate();
    if (horizon < 2) throw ValidationError("planner: horizon must be >= 2");
  }

  /// Algorithm presets with the fixed hyperparameters K=10, sigma_init=0.5;
  /// iCEM adds alpha=0.1, gamma=1.25, xi=0.3. Iterations and N come from
  /// the budget schedule and are left at their defaults here.
  static PlannerConfig preset(Variant v, double beta = 2.0) {
    PlannerConfig cfg;
    OptimizerConfig& o = cfg.optimizer;
    o.beta = beta;
    o.elites = 10;
    o.sigma_init = 0.5;
    o.elite_fraction = 0.3;
    switch (v) {
      case Variant::icem:
        o.alpha = 0.1;
        o.gamma = 1.25;
        o.colored_noise = o.keep_elites = o.shift_elites = o.decay = true;
        o.clip_sampling = o.best_action = o.add_mean_last_iter = true;
        break;
      case Variant::cem:
        o.alpha = 0.0;
        o.gamma = 1.0;
        o.truncated_sampling = true;
        cfg.shift_initialization = false;
        break;
      case Variant::cem_mpc:
        o.alpha = 0.1;
        o.gamma = 1.0;
        o.truncated_sampling = true;
        break;
      case Variant::cem_pets:
        o.alpha = 0.1;
        o.gamma = 1.0;
        o.pets_sigma = true;
        break;
    }
    return cfg;
  }
};

struct PlannerState {
  std::optional<ActionSequence> prev_mean;
  std::optional<EliteSet> prev_elites;
  std::size_t step_index = 0;
  /// Number of steps whose stored elites were fed back into the optimizer.
  std::size_t elite_carryovers = 0;
};

/// Drops column 0 and repeats the last column: [A, B, C] -> [B, C, C].
inline ActionSequence shift_mean(const ActionSequence& prev) {
  if (prev.cols() < 2) throw ValidationError("shift_mean: horizon must be >= 2");
  const Eigen::Index h = prev.cols();
  ActionSequence out(prev.rows(), h);
  out.leftCols(h - 1) = prev.rightCols(h - 1);
  out.col(h - 1) = prev.col(h - 1);
  return out;
}

/// Best ceil(xi K) elites, each shifted left by one step. The new terminal
/// action is the old last action plus sigma_init times the last column of a
/// fresh colored (or white) noise block, clipped to the bounds.
template <class Rng>
std::vector<ActionSequence> shift_elites(const EliteSet& elites, Rng& rng, const OptimizerConfig& cfg,
                                         const ActionBounds& bounds) {
  std::vector<ActionSequence> out;
  const std::size_t count = std::min(cfg.reused_elites(), elites.size());
  for (std::size_t j = 0; j < count; ++j) {
    const ActionSequence& seq = elites.sequences[j];
    ActionSequence shifted = shift_mean(seq);
    const Eigen::Index h = seq.cols();
    const ActionSequence noise = cfg.colored_noise ? sample_colored(NoiseSpec{cfg.beta, seq.rows(), h}, rng)
                                                   : sample_white(seq.rows(), h, rng);
    shifted.col(h - 1) = seq.col(h - 1) + cfg.sigma_init * noise.col(h - 1);
    bounds.clamp(shifted);
    out.push_back(std::move(shifted));
  }
  return out;
}

/// Planning failure with the environment step it happened at.
class PlanningError : public std::runtime_error {
 public:
  PlanningError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  [[nodiscard]] std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Negative return of an h-step open-loop rollout from `start`.
template <Environment Env>
double rollout_cost(const Env& env, const typename Env::State& start, const ActionSequence& actions) {
  typename Env::State s = clone_state(start);
  double total = 0.0;
  Action a(actions.rows());
  for (Eigen::Index t = 0; t < actions.cols(); ++t) {
    a = actions.col(t);
    typename Env::State next = env.step(s, a);
    total += env.reward(s, a, next);
    s = std::move(next);
  }
  return -total;
}

struct PlanStepResult {
  Action action;
  PlannerState state;
  OptimizationResult optimization;
};

/// One MPC step: build the initial distribution, optimise open-loop action
/// sequences with the model, and return the action to execute.
template <Environment Env, class Rng>
PlanStepResult plan_step(const typename Env::State& current, const Env& model, const PlannerState& pstate,
                         const PlannerConfig& cfg, Rng& rng) {
  cfg.validate();
  const OptimizerConfig& opt = cfg.optimizer;
  const ActionBounds& bounds = model.action_bounds();
  try {
    SamplingDistribution init =
        SamplingDistribution::constant(bounds.midpoint(), opt.sigma_init, cfg.horizon);
    if (cfg.shift_initialization && pstate.prev_mean) init.mean = shift_mean(*pstate.prev_mean);

    PlanStepResult out;
    out.state = pstate;
    std::vector<ActionSequence> carryover;
    if (opt.shift_elites && pstate.prev_elites) {
      carryover = shift_elites(*pstate.prev_elites, rng, opt, bounds);
      ++out.state.elite_carryovers;
    }

    auto cost = [&](const ActionSequence& seq) { return rollout_cost(model, current, seq); };
    out.optimization = run_optimization(cost, init, carryover, opt, bounds, rng);

    const OptimizationResult& res = out.optimization;
    out.action = opt.best_action ? Action(res.best_sequence.col(0)) : Action(res.final_distribution.mean.col(0));
    out.state.prev_mean = res.final_distribution.mean;
    out.state.prev_elites = res.final_elites;
    ++out.state.step_index;
    return out;
  } catch (const PlanningError&) {
    throw;
  } catch (const std::exception& e) {
    throw PlanningError(pstate.step_index, e.what());
  }
}

template <class State>
struct EpisodeRecord {
  std::vector<State> states;  // T + 1 entries, starting with the initial state
  std::vector<Action> actions;
  std::vector<double> rewards;
  double cumulative_reward = 0.0;
  bool success = false;
  std::vector<std::size_t> evaluations_per_step;

  [[nodiscard]] std::size_t total_evaluations() const {
    std::size_t n = 0;
    for (std::size_t e : evaluations_per_step) n += e;
    return n;
  }
};

/// Closed loop on the ground-truth model: plan, execute, repeat T times.
template <Environment Env>
EpisodeRecord<typename Env::State> run_episode(const Env& env, const PlannerConfig& cfg, std::size_t steps,
                                               std::uint64_t seed) {
  if (steps < 1) throw ValidationError("run_episode: T must be >= 1");
  cfg.validate();
  std::mt19937_64 rng(seed);
  EpisodeRecord<typename Env::State> rec;
  rec.states.push_back(env.initial_state());
  PlannerState pstate;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& s = rec.states.back();
    PlanStepResult plan = plan_step(s, env, pstate, cfg, rng);
    typename Env::State next = [&] {
      try {
        return env.step(s, plan.action);
      } catch (const std::exception& e) {
        throw PlanningError(t, e.what());
      }
    }();
    const double r = env.reward(s, plan.action, next);
    rec.actions.push_back(plan.action);
    rec.rewards.push_back(r);
    rec.cumulative_reward += r;
    rec.evaluations_per_step.push_back(plan.optimization.evaluations);
    rec.states.push_back(std::move(next));
    pstate = std::move(plan.state);
  }
  rec.success = env.episode_success(std::span<const typename Env::State>(rec.states));
  return rec;
}

}  // namespace icem
