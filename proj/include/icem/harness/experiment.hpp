#pragma once

// Experiment configuration: which environment, which algorithms, which
// budgets and seeds, plus per-field optimizer overrides.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "icem/harness/environments.hpp"
#include "icem/harness/schedule.hpp"
#include "icem/planner.hpp"

namespace icem::harness {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto item = trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("override '" + key + "': expected a boolean, got '" + v + "'");
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ValidationError("'" + key + "': expected a number, got '" + v + "'");
}

inline std::uint64_t parse_count(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("'" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return std::stoull(v);
}

}  // namespace detail

/// Comma-separated integers with inclusive ranges: "0-4, 10" -> 0 1 2 3 4 10.
inline std::vector<std::uint64_t> parse_index_list(std::string_view text, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const auto& item : detail::split_list(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(detail::parse_count(what, item));
      continue;
    }
    const auto lo = detail::parse_count(what, detail::trim(item.substr(0, dash)));
    const auto hi = detail::parse_count(what, detail::trim(item.substr(dash + 1)));
    if (hi < lo) throw ValidationError("'" + what + "': empty range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

inline const std::vector<std::string>& optimizer_flag_names() {
  static const std::vector<std::string> names{
      "colored_noise", "keep_elites",        "shift_elites", "decay",
      "clip_sampling", "best_action",        "add_mean_last_iter",
      "pets_sigma",    "truncated_sampling",
  };
  return names;
}

inline bool* optimizer_flag(OptimizerConfig& cfg, std::string_view name) {
  if (name == "colored_noise") return &cfg.colored_noise;
  if (name == "keep_elites") return &cfg.keep_elites;
  if (name == "shift_elites") return &cfg.shift_elites;
  if (name == "decay") return &cfg.decay;
  if (name == "clip_sampling") return &cfg.clip_sampling;
  if (name == "best_action") return &cfg.best_action;
  if (name == "add_mean_last_iter") return &cfg.add_mean_last_iter;
  if (name == "pets_sigma") return &cfg.pets_sigma;
  if (name == "truncated_sampling") return &cfg.truncated_sampling;
  return nullptr;
}

/// Sets one OptimizerConfig field (or planner field) from text. Unknown keys
/// are a ValidationError. Invariants are checked later, on the full config.
inline void apply_override(PlannerConfig& cfg, const std::string& key, const std::string& value) {
  OptimizerConfig& o = cfg.optimizer;
  if (bool* flag = optimizer_flag(o, key)) {
    *flag = detail::parse_bool(key, value);
  } else if (key == "num_samples") {
    o.num_samples = detail::parse_count(key, value);
  } else if (key == "elites") {
    o.elites = detail::parse_count(key, value);
  } else if (key == "iterations") {
    o.iterations = detail::parse_count(key, value);
  } else if (key == "beta") {
    o.beta = detail::parse_double(key, value);
  } else if (key == "gamma") {
    o.gamma = detail::parse_double(key, value);
  } else if (key == "alpha") {
    o.alpha = detail::parse_double(key, value);
  } else if (key == "elite_fraction") {
    o.elite_fraction = detail::parse_double(key, value);
  } else if (key == "sigma_init") {
    o.sigma_init = detail::parse_double(key, value);
  } else if (key == "shift_initialization") {
    cfg.shift_initialization = detail::parse_bool(key, value);
  } else {
    throw ValidationError("unknown optimizer setting '" + key + "'");
  }
}

struct ExperimentConfig {
  std::string env = "point_mass_sparse";
  std::vector<Variant> variants{Variant::icem};
  std::vector<std::size_t> budgets{100};
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::optional<std::size_t> episode_length;  // environment default when empty
  std::optional<double> beta;                 // environment default when empty
  Eigen::Index horizon = 30;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> features;  // ablation only
  std::string output_path;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

  [[nodiscard]] std::size_t steps() const {
    return episode_length.value_or(environment_info(env).episode_length);
  }

  /// Preset for `v` with beta, horizon and overrides applied. The schedule
  /// for `budget` is applied unless iterations or num_samples are overridden.
  [[nodiscard]] PlannerConfig planner_config(Variant v, std::size_t budget) const {
    PlannerConfig cfg = PlannerConfig::preset(v, beta.value_or(environment_info(env).beta));
    cfg.horizon = horizon;
    for (const auto& [k, val] : overrides) apply_override(cfg, k, val);
    apply_schedule(cfg, budget);
    cfg.validate();
    return cfg;
  }

  void apply_schedule(PlannerConfig& cfg, std::size_t budget) const {
    const Schedule s = schedule_for(budget, cfg.optimizer);
    if (!overrides.contains("iterations")) cfg.optimizer.iterations = s.iterations;
    if (!overrides.contains("num_samples")) cfg.optimizer.num_samples = s.num_samples;
  }

  void validate() const {
    environment_info(env);
    if (variants.empty()) throw ValidationError("experiment: no variants");
    if (budgets.empty()) throw ValidationError("experiment: no budgets");
    if (seeds.empty()) throw ValidationError("experiment: no seeds");
    if (steps() < 1) throw ValidationError("experiment: episode length must be >= 1");
    if (workers < 1) throw ValidationError("experiment: workers must be >= 1");
    for (Variant v : variants) {
      for (std::size_t b : budgets) static_cast<void>(planner_config(v, b));
    }
  }
};

}  // namespace icem::harness
