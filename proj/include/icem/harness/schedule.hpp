#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "icem/optimizer.hpp"
#include "icem/planner.hpp"

namespace icem::harness {

struct Schedule {
  std::size_t iterations = 0;
  std::size_t num_samples = 0;  // N

  bool operator==(const Schedule&) const = default;
};

struct BudgetRow {
  std::size_t budget;
  Schedule decayed;   // iCEM, gamma = 1.25
  Schedule constant;  // CEM baselines, no decay
};

/// Budget (trajectories per step) -> (CEM-iterations, N).
inline constexpr std::array<BudgetRow, 12> kBudgetTable{{
    {50, {2, 25}, {2, 25}},
    {70, {2, 40}, {2, 35}},
    {100, {3, 40}, {2, 50}},
    {150, {3, 60}, {2, 75}},
    {200, {4, 65}, {3, 66}},
    {250, {4, 85}, {3, 83}},
    {300, {4, 100}, {3, 100}},
    {400, {5, 120}, {4, 100}},
    {500, {5, 150}, {4, 125}},
    {1000, {6, 270}, {4, 250}},
    {2000, {8, 480}, {6, 333}},
    {4000, {10, 900}, {8, 500}},
}};

/// Trajectories evaluated by a schedule, excluding injected elites.
inline std::size_t schedule_cost(const Schedule& s, const OptimizerConfig& cfg) {
  OptimizerConfig probe = cfg;
  probe.num_samples = s.num_samples;
  std::size_t total = 0;
  for (std::size_t i = 0; i < s.iterations; ++i) total += population_size(i, probe);
  return total;
}

/// Tabulated budgets return the table entry. Other budgets take the iteration
/// count of the nearest tabulated budget below (the smallest entry's count
/// below 50), then the largest N whose decayed sum stays within the budget;
/// iterations drop until N >= 2K is feasible.
inline Schedule schedule_for(std::size_t budget, const OptimizerConfig& cfg) {
  const std::size_t floor_n = 2 * cfg.elites;
  if (budget < floor_n) {
    throw ValidationError("budget " + std::to_string(budget) + " is below 2K = " + std::to_string(floor_n));
  }
  std::size_t iterations = cfg.decay ? kBudgetTable.front().decayed.iterations
                                     : kBudgetTable.front().constant.iterations;
  for (const BudgetRow& row : kBudgetTable) {
    const Schedule& tab = cfg.decay ? row.decayed : row.constant;
    if (row.budget == budget) return tab;
    if (row.budget < budget) iterations = tab.iterations;
  }
  for (; iterations >= 1; --iterations) {
    Schedule s{iterations, floor_n};
    if (schedule_cost(s, cfg) > budget) continue;
    while (schedule_cost(Schedule{iterations, s.num_samples + 1}, cfg) <= budget) ++s.num_samples;
    return s;
  }
  throw ValidationError("budget " + std::to_string(budget) + " admits no schedule");
}

/// Schedule for a named variant with its preset hyperparameters.
inline Schedule budget_to_schedule(std::size_t budget, Variant variant) {
  return schedule_for(budget, PlannerConfig::preset(variant).optimizer);
}

}  // namespace icem::harness
