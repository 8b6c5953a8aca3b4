#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "icem/envs/environment.hpp"
#include "icem/planner.hpp"
#include "icem/spectrum.hpp"

namespace icem::harness {

struct ActionSpectrum {
  std::vector<SpectrumEstimate> per_dimension;
  /// Fitted exponent per dimension; empty where the fit was rejected.
  std::vector<std::optional<double>> exponents;
  /// Mean over the dimensions that could be fitted.
  std::optional<double> mean_exponent;
};

/// Periodogram of each executed action dimension over the episode.
inline ActionSpectrum analyze_action_psd(std::span<const Action> actions, const FitBand& band = {}) {
  if (actions.size() < 16) {
    throw ValidationError("analyze_action_psd: need at least 16 executed actions, got " +
                          std::to_string(actions.size()));
  }
  const Eigen::Index dims = actions.front().size();
  ActionSpectrum out;
  double sum = 0.0;
  std::size_t fitted = 0;
  for (Eigen::Index d = 0; d < dims; ++d) {
    std::vector<double> series;
    series.reserve(actions.size());
    for (const auto& a : actions) series.push_back(a[d]);
    out.per_dimension.push_back(estimate_psd(std::span<const double>(series)));
    try {
      const double slope = fit_spectral_exponent(out.per_dimension.back(), band);
      out.exponents.emplace_back(slope);
      sum += slope;
      ++fitted;
    } catch (const FitError&) {
      out.exponents.emplace_back(std::nullopt);
    }
  }
  if (fitted > 0) out.mean_exponent = sum / static_cast<double>(fitted);
  return out;
}

template <class State>
ActionSpectrum analyze_action_psd(const EpisodeRecord<State>& record, const FitBand& band = {}) {
  return analyze_action_psd(std::span<const Action>(record.actions), band);
}

/// Episode driven by i.i.d. uniform actions over the bounds: the white-noise
/// reference policy.
template <Environment Env>
EpisodeRecord<typename Env::State> run_white_policy_episode(const Env& env, std::size_t steps,
                                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ActionBounds& bounds = env.action_bounds();
  EpisodeRecord<typename Env::State> rec;
  rec.states.push_back(env.initial_state());
  for (std::size_t t = 0; t < steps; ++t) {
    Action a(bounds.dims());
    for (Eigen::Index d = 0; d < a.size(); ++d) {
      a[d] = bounds.lower[d] + (bounds.upper[d] - bounds.lower[d]) * uniform01(rng);
    }
    const auto& s = rec.states.back();
    auto next = env.step(s, a);
    const double r = env.reward(s, a, next);
    rec.actions.push_back(a);
    rec.rewards.push_back(r);
    rec.cumulative_reward += r;
    rec.evaluations_per_step.push_back(0);
    rec.states.push_back(std::move(next));
  }
  rec.success = env.episode_success(std::span<const typename Env::State>(rec.states));
  return rec;
}

}  // namespace icem::harness
