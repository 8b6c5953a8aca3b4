#pragma once

// Single-problem cross-entropy optimisation over action sequences.
//
// One implementation covers vanilla CEM, CEM with momentum and truncated
// sampling, the PETS sigma adaptation and iCEM; OptimizerConfig flags pick
// the behaviour.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "icem/noise.hpp"
#include "icem/types.hpp"

namespace icem {

/// Lower bound for every standard deviation produced by a refit.
inline constexpr double kSigmaFloor = 1e-6;

struct SamplingDistribution {
  ActionSequence mean;
  ActionSequence std;

  static SamplingDistribution constant(const Action& mean, double std, Eigen::Index horizon) {
    return {mean.replicate(1, horizon), ActionSequence::Constant(mean.size(), horizon, std)};
  }
};

struct EliteSet {
  std::vector<ActionSequence> sequences;
  std::vector<double> costs;  // ascending

  [[nodiscard]] std::size_t size() const { return sequences.size(); }
  [[nodiscard]] bool empty() const { return sequences.empty(); }
};

struct OptimizerConfig {
  std::size_t num_samples = 100;  // N, population of the first iteration
  std::size_t elites = 10;        // K
  std::size_t iterations = 3;
  double beta = 2.0;
  double gamma = 1.25;
  double alpha = 0.1;
  double elite_fraction = 0.3;  // xi
  double sigma_init = 0.5;

  bool colored_noise = false;
  bool keep_elites = false;
  bool shift_elites = false;
  bool decay = false;
  bool clip_sampling = false;
  bool best_action = false;
  bool add_mean_last_iter = false;
  bool pets_sigma = false;
  bool truncated_sampling = false;

  /// ceil(xi * K), tolerant to the rounding of xi * K in binary.
  [[nodiscard]] std::size_t reused_elites() const {
    const double raw = elite_fraction * static_cast<double>(elites);
    return std::min(elites, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
  }

  void validate() const {
    if (elites < 1) throw ValidationError("optimizer: elites (K) must be >= 1");
    if (num_samples < 2 * elites) {
      throw ValidationError("optimizer: num_samples (N=" + std::to_string(num_samples) +
                            ") must be >= 2K (" + std::to_string(2 * elites) + ")");
    }
    if (iterations < 1) throw ValidationError("optimizer: iterations must be >= 1");
    if (!(gamma >= 1.0)) throw ValidationError("optimizer: gamma must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("optimizer: alpha must be in [0, 1]");
    if (!(elite_fraction >= 0.0 && elite_fraction <= 1.0)) {
      throw ValidationError("optimizer: elite_fraction must be in [0, 1]");
    }
    if (!(sigma_init > 0.0)) throw ValidationError("optimizer: sigma_init must be > 0");
    if (!(beta >= 0.0)) throw ValidationError("optimizer: beta must be >= 0");
    if (int(clip_sampling) + int(truncated_sampling) + int(pets_sigma) > 1) {
      throw ValidationError(
          "optimizer: clip_sampling, truncated_sampling and pets_sigma are mutually exclusive");
    }
  }
};

/// N_i = max(floor(N / gamma^i), 2K) with decay, N otherwise.
inline std::size_t population_size(std::size_t iteration, const OptimizerConfig& cfg) {
  if (!cfg.decay) return cfg.num_samples;
  const double decayed =
      std::floor(static_cast<double>(cfg.num_samples) / std::pow(cfg.gamma, static_cast<double>(iteration)));
  return std::max(static_cast<std::size_t>(decayed), 2 * cfg.elites);
}

/// Caps sigma at half the distance from the mean to the nearest bound.
inline SamplingDistribution pets_adapt_sigma(const SamplingDistribution& dist, const ActionBounds& bounds) {
  SamplingDistribution out = dist;
  for (Eigen::Index t = 0; t < dist.mean.cols(); ++t) {
    for (Eigen::Index r = 0; r < dist.mean.rows(); ++r) {
      const double m = dist.mean(r, t);
      const double room = std::max(0.0, std::min(m - bounds.lower[r], bounds.upper[r] - m));
      out.std(r, t) = std::max(std::min(dist.std(r, t), 0.5 * room), kSigmaFloor);
    }
  }
  return out;
}

namespace detail {

inline constexpr int kMaxRejections = 100;

/// Redraws z until lo <= z <= hi; after kMaxRejections the last draw is clamped.
template <class Rng>
double redraw_into(double z, double lo, double hi, Rng& rng) {
  if (lo > hi) return lo;
  for (int attempt = 0; (z < lo || z > hi) && attempt < kMaxRejections; ++attempt) {
    z = standard_normal(rng);
  }
  return std::clamp(z, lo, hi);
}

}  // namespace detail

/// Draws n candidates around dist.
///
/// Standard-normal (or colored, with colored_noise) noise is scaled by the
/// std and added to the mean. truncated_sampling redraws elements that fall
/// outside the action bounds; pets_sigma first caps sigma via
/// pets_adapt_sigma and redraws beyond 2 sigma. Every candidate is finally
/// clamped into the bounds, which is what clip_sampling relies on.
template <class Rng>
std::vector<ActionSequence> sample_candidates(const SamplingDistribution& dist, std::size_t n,
                                              const OptimizerConfig& cfg, const ActionBounds& bounds,
                                              Rng& rng) {
  const Eigen::Index d = dist.mean.rows();
  const Eigen::Index h = dist.mean.cols();
  const ActionSequence std_dev = cfg.pets_sigma ? pets_adapt_sigma(dist, bounds).std : dist.std;

  std::vector<ActionSequence> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    ActionSequence z = cfg.colored_noise ? sample_colored(NoiseSpec{cfg.beta, d, h}, rng)
                                         : sample_white(d, h, rng);
    if (cfg.truncated_sampling || cfg.pets_sigma) {
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index t = 0; t < h; ++t) {
          const double sd = std_dev(r, t);
          if (!(sd > 0.0)) continue;
          double lo = -2.0, hi = 2.0;
          if (cfg.truncated_sampling) {
            lo = (bounds.lower[r] - dist.mean(r, t)) / sd;
            hi = (bounds.upper[r] - dist.mean(r, t)) / sd;
          }
          z(r, t) = detail::redraw_into(z(r, t), lo, hi, rng);
        }
      }
    }
    ActionSequence x = dist.mean + std_dev.cwiseProduct(z);
    bounds.clamp(x);
    out.push_back(std::move(x));
  }
  return out;
}

/// Indices of the K lowest costs, ascending, ties kept in index order.
/// NaN costs rank after every number.
inline std::vector<std::size_t> select_elite_indices(const std::vector<double>& costs, std::size_t k) {
  if (k < 1 || costs.size() < k) {
    throw ValidationError("select_elites: need at least K=" + std::to_string(k) + " candidates, got " +
                          std::to_string(costs.size()));
  }
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::isnan(costs[i]) ? std::numeric_limits<double>::infinity() : costs[i];
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  order.resize(k);
  return order;
}

inline EliteSet select_elites(const std::vector<ActionSequence>& candidates, const std::vector<double>& costs,
                              std::size_t k) {
  if (candidates.size() != costs.size()) {
    throw ValidationError("select_elites: candidates and costs differ in length");
  }
  EliteSet out;
  for (std::size_t i : select_elite_indices(costs, k)) {
    out.sequences.push_back(candidates[i]);
    out.costs.push_back(costs[i]);
  }
  return out;
}

/// Moment fit to the elites blended with the old distribution:
///   mean <- alpha * mean + (1 - alpha) * elite_mean
///   std  <- max(alpha * std + (1 - alpha) * elite_std, kSigmaFloor)
/// elite_std is the population (divide-by-K) standard deviation.
inline SamplingDistribution refit_distribution(const SamplingDistribution& dist, const EliteSet& elites,
                                               double alpha) {
  if (elites.empty()) throw ValidationError("refit_distribution: empty elite set");
  const double k = static_cast<double>(elites.size());
  ActionSequence mean = ActionSequence::Zero(dist.mean.rows(), dist.mean.cols());
  for (const auto& seq : elites.sequences) mean += seq;
  mean /= k;
  ActionSequence var = ActionSequence::Zero(mean.rows(), mean.cols());
  for (const auto& seq : elites.sequences) var += (seq - mean).cwiseAbs2();
  var /= k;

  SamplingDistribution out;
  out.mean = alpha * dist.mean + (1.0 - alpha) * mean;
  out.std = (alpha * dist.std + (1.0 - alpha) * var.cwiseSqrt()).cwiseMax(kSigmaFloor);
  return out;
}

/// Per-iteration bookkeeping, kept for inspection and testing.
struct IterationRecord {
  std::size_t population = 0;  // fresh samples N_i
  std::size_t injected = 0;    // re-used elites placed before the fresh samples
  bool mean_added = false;     // mean appended after the fresh samples
  std::vector<std::size_t> elite_indices;  // into [injected..., fresh..., mean]
  double best_cost = 0.0;                  // global best after this iteration
  SamplingDistribution distribution;       // after refit
};

struct OptimizationResult {
  ActionSequence best_sequence;
  double best_cost = std::numeric_limits<double>::infinity();
  SamplingDistribution final_distribution;
  EliteSet final_elites;
  std::size_t evaluations = 0;
  std::vector<IterationRecord> trace;
};

template <class F>
concept CostFunction = std::invocable<F&, const ActionSequence&> &&
                       std::convertible_to<std::invoke_result_t<F&, const ActionSequence&>, double>;

/// Runs cfg.iterations rounds of sample / evaluate / select / refit.
///
/// Candidate pool per iteration, in this order: re-used elites (the
/// carryover at iteration 0, the previous iteration's best ceil(xi K) later
/// when keep_elites is on), N_i fresh samples, and the current mean at the
/// last iteration when add_mean_last_iter is on. Every pool member is
/// evaluated and counted. The refit mean is clamped into the bounds.
template <CostFunction Cost, class Rng>
OptimizationResult run_optimization(Cost&& cost, const SamplingDistribution& init,
                                    const std::vector<ActionSequence>& carryover, const OptimizerConfig& cfg,
                                    const ActionBounds& bounds, Rng& rng) {
  cfg.validate();
  bounds.validate();
  if (init.mean.rows() != bounds.dims() || init.std.rows() != init.mean.rows() ||
      init.std.cols() != init.mean.cols() || init.mean.cols() < 2) {
    throw ValidationError("run_optimization: distribution shape does not match bounds or horizon < 2");
  }
  if (!carryover.empty() && !cfg.shift_elites) {
    throw ValidationError("run_optimization: carryover elites given but shift_elites is off");
  }

  OptimizationResult result;
  SamplingDistribution dist = init;
  EliteSet elites;
  const std::size_t reuse = cfg.reused_elites();

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    IterationRecord rec;
    rec.population = population_size(it, cfg);

    std::vector<ActionSequence> pool;
    if (it == 0) {
      for (std::size_t j = 0; j < std::min(reuse, carryover.size()); ++j) {
        ActionSequence seq = carryover[j];
        bounds.clamp(seq);
        pool.push_back(std::move(seq));
      }
    } else if (cfg.keep_elites) {
      for (std::size_t j = 0; j < std::min(reuse, elites.size()); ++j) pool.push_back(elites.sequences[j]);
    }
    rec.injected = pool.size();

    auto fresh = sample_candidates(dist, rec.population, cfg, bounds, rng);
    std::move(fresh.begin(), fresh.end(), std::back_inserter(pool));
    if (cfg.add_mean_last_iter && it + 1 == cfg.iterations) {
      ActionSequence mean = dist.mean;
      bounds.clamp(mean);
      pool.push_back(std::move(mean));
      rec.mean_added = true;
    }

    std::vector<double> costs;
    costs.reserve(pool.size());
    for (const auto& seq : pool) costs.push_back(static_cast<double>(cost(seq)));
    result.evaluations += pool.size();

    for (std::size_t j = 0; j < pool.size(); ++j) {
      const double c = std::isnan(costs[j]) ? std::numeric_limits<double>::infinity() : costs[j];
      if (result.best_sequence.size() == 0 || c < result.best_cost) {
        result.best_cost = c;
        result.best_sequence = pool[j];
      }
    }

    rec.elite_indices = select_elite_indices(costs, cfg.elites);
    elites = EliteSet{};
    for (std::size_t j : rec.elite_indices) {
      elites.sequences.push_back(pool[j]);
      elites.costs.push_back(costs[j]);
    }
    dist = refit_distribution(dist, elites, cfg.alpha);
    bounds.clamp(dist.mean);

    rec.best_cost = result.best_cost;
    rec.distribution = dist;
    result.trace.push_back(std::move(rec));
  }

  result.final_distribution = std::move(dist);
  result.final_elites = std::move(elites);
  return result;
}

}  // namespace icem
