#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "icem/harness/environments.hpp"
#include "icem/harness/experiment.hpp"
#include "icem/planner.hpp"

namespace icem::harness {

struct SweepRow {
  std::string env;
  std::string variant;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  double cumulative_reward = 0.0;
  bool success = false;
  std::size_t total_evaluations = 0;
  std::string error;  // empty when the episode completed

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

/// A planner configuration under a row label, e.g. "icem" or "cem_mpc+decay".
struct LabeledConfig {
  std::string label;
  PlannerConfig config;  // iterations and N are filled in per budget
};

/// Runs one episode on the named environment; failures land in row.error.
inline SweepRow run_cell(const std::string& env_id, const std::string& label, const PlannerConfig& cfg,
                         std::size_t budget, std::uint64_t seed, std::size_t steps) {
  SweepRow row{env_id, label, budget, seed, 0.0, false, 0, {}};
  try {
    const AnyEnvironment env = make_environment(env_id);
    std::visit(
        [&](const auto& e) {
          const auto rec = run_episode(e, cfg, steps, seed);
          row.cumulative_reward = rec.cumulative_reward;
          row.success = rec.success;
          row.total_evaluations = rec.total_evaluations();
        },
        env);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Evaluates every (config, budget, seed) cell on a pool of `workers`
/// threads. Rows come back in enumeration order (config, then budget, then
/// seed) whatever the completion order.
inline SweepResult run_cells(const ExperimentConfig& exp, const std::vector<LabeledConfig>& configs) {
  struct Cell {
    const LabeledConfig* cfg;
    std::size_t budget;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& c : configs) {
    for (std::size_t b : exp.budgets) {
      for (std::uint64_t s : exp.seeds) cells.push_back({&c, b, s});
    }
  }

  const std::size_t steps = exp.steps();
  SweepResult result;
  result.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& cell = cells[i];
      PlannerConfig cfg = cell.cfg->config;
      try {
        exp.apply_schedule(cfg, cell.budget);
        cfg.validate();
      } catch (const std::exception& e) {
        result.rows[i] = SweepRow{exp.env, cell.cfg->label, cell.budget, cell.seed, 0.0, false, 0, {}};
        result.rows[i].error = e.what();
        continue;
      }
      result.rows[i] = run_cell(exp.env, cell.cfg->label, cfg, cell.budget, cell.seed, steps);
    }
  };
  const std::size_t n_threads = std::min(exp.workers, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return result;
}

/// One row per (variant, budget, seed).
inline SweepResult run_budget_sweep(const ExperimentConfig& exp) {
  exp.validate();
  std::vector<LabeledConfig> configs;
  for (Variant v : exp.variants) {
    configs.push_back({std::string(to_string(v)), exp.planner_config(v, exp.budgets.front())});
  }
  return run_cells(exp, configs);
}

/// Turns one feature on or off, keeping the sampling-mode flags consistent:
/// clip, truncation and the PETS adaptation replace one another, disabling
/// colored noise forces beta to 0, and enabling decay restores gamma = 1.25.
inline void set_feature(PlannerConfig& cfg, const std::string& feature, bool on) {
  OptimizerConfig& o = cfg.optimizer;
  bool* flag = optimizer_flag(o, feature);
  if (flag == nullptr) {
    std::string valid;
    for (const auto& n : optimizer_flag_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ValidationError("unknown ablation feature '" + feature + "' (valid: " + valid + ")");
  }
  const bool is_sampling_mode =
      feature == "clip_sampling" || feature == "truncated_sampling" || feature == "pets_sigma";
  if (is_sampling_mode) {
    o.clip_sampling = o.truncated_sampling = o.pets_sigma = false;
    if (on) {
      *flag = true;
    } else if (feature == "truncated_sampling") {
      o.clip_sampling = true;
    } else {
      o.truncated_sampling = true;
    }
    return;
  }
  *flag = on;
  if (feature == "colored_noise" && !on) o.beta = 0.0;
  if (feature == "decay" && on && o.gamma <= 1.0) o.gamma = 1.25;
}

/// Baselines iCEM and CEM_MPC plus, per feature, iCEM without it
/// ("icem-<feature>") and CEM_MPC with it ("cem_mpc+<feature>").
inline SweepResult run_ablation(const ExperimentConfig& exp, const std::vector<std::string>& features) {
  exp.validate();
  for (const auto& f : features) {
    PlannerConfig probe;
    set_feature(probe, f, true);
  }
  const std::size_t b0 = exp.budgets.front();
  const PlannerConfig icem = exp.planner_config(Variant::icem, b0);
  const PlannerConfig mpc = exp.planner_config(Variant::cem_mpc, b0);
  std::vector<LabeledConfig> configs{{"icem", icem}, {"cem_mpc", mpc}};
  for (const auto& f : features) {
    LabeledConfig minus{"icem-" + f, icem};
    set_feature(minus.config, f, false);
    configs.push_back(std::move(minus));
  }
  for (const auto& f : features) {
    LabeledConfig plus{"cem_mpc+" + f, mpc};
    set_feature(plus.config, f, true);
    configs.push_back(std::move(plus));
  }
  return run_cells(exp, configs);
}

}  // namespace icem::harness
