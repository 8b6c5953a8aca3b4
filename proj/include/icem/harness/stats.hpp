#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "icem/harness/sweep.hpp"

namespace icem::harness {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Standard error of a Bernoulli rate estimate: sqrt(p (1 - p) / n).
inline double binomial_standard_error(double rate, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

/// Exact (Clopper-Pearson) interval for `successes` out of `n`.
inline Interval clopper_pearson(std::size_t successes, std::size_t n, double confidence = 0.95) {
  if (n == 0) return {};
  const double a = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto dn = static_cast<double>(n);
  Interval out;
  if (successes > 0) out.lower = boost::math::quantile(boost::math::beta_distribution<>(k, dn - k + 1.0), a / 2);
  if (successes < n) {
    out.upper = boost::math::quantile(boost::math::beta_distribution<>(k + 1.0, dn - k), 1.0 - a / 2);
  }
  return out;
}

struct CellSummary {
  std::string variant;
  std::size_t budget = 0;
  std::size_t episodes = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;  // rows with an error
  double mean_reward = 0.0;
  double mean_evaluations = 0.0;

  [[nodiscard]] double success_rate() const {
    return episodes == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(episodes);
  }
  [[nodiscard]] double standard_error() const { return binomial_standard_error(success_rate(), episodes); }
  [[nodiscard]] Interval interval() const { return clopper_pearson(successes, episodes); }
};

/// Aggregates rows per (variant, budget) in first-appearance order. Rows with
/// an error are counted separately and excluded from the rates.
inline std::vector<CellSummary> summarize(const SweepResult& result) {
  std::vector<CellSummary> out;
  std::map<std::pair<std::string, std::size_t>, std::size_t> index;
  for (const auto& row : result.rows) {
    auto [it, inserted] = index.try_emplace({row.variant, row.budget}, out.size());
    if (inserted) out.push_back(CellSummary{row.variant, row.budget});
    CellSummary& s = out[it->second];
    if (!row.error.empty()) {
      ++s.failures;
      continue;
    }
    ++s.episodes;
    s.successes += row.success ? 1 : 0;
    s.mean_reward += row.cumulative_reward;
    s.mean_evaluations += static_cast<double>(row.total_evaluations);
  }
  for (auto& s : out) {
    if (s.episodes > 0) {
      s.mean_reward /= static_cast<double>(s.episodes);
      s.mean_evaluations /= static_cast<double>(s.episodes);
    }
  }
  return out;
}

inline const CellSummary* find_summary(const std::vector<CellSummary>& summaries, const std::string& variant,
                                       std::size_t budget) {
  for (const auto& s : summaries) {
    if (s.variant == variant && s.budget == budget) return &s;
  }
  return nullptr;
}

}  // namespace icem::harness
