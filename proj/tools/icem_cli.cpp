// icem: budget sweeps, ablations, action spectra and single episodes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "icem/harness/config_file.hpp"
#include "icem/harness/csv.hpp"
#include "icem/harness/environments.hpp"
#include "icem/harness/experiment.hpp"
#include "icem/harness/psd_analysis.hpp"
#include "icem/harness/stats.hpp"
#include "icem/harness/sweep.hpp"

namespace {

using namespace icem;
using namespace icem::harness;

struct CommonFlags {
  std::string config;
  std::string env;
  std::string variants;
  std::string budgets;
  std::string seeds;
  std::optional<long> horizon;
  std::optional<std::size_t> steps;
  std::optional<double> beta;
  std::optional<std::size_t> workers;
  std::string out;
  std::vector<std::string> set;
  std::string features;
  std::string policy = "planner";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "INI experiment file; flags override its values");
  cmd->add_option("--env", f.env, "point_mass_sparse | integrator | pendulum");
  cmd->add_option("--variant,--variants", f.variants, "comma list of icem, cem, cem_mpc, cem_pets");
  cmd->add_option("--budget,--budgets", f.budgets, "trajectories per step, comma list");
  cmd->add_option("--seeds", f.seeds, "seed list, e.g. 0-49 or 1,2,3");
  cmd->add_option("--horizon", f.horizon, "planning horizon h (default 30)");
  cmd->add_option("--steps", f.steps, "episode length T (environment default otherwise)");
  cmd->add_option("--beta", f.beta, "colored-noise exponent (environment default otherwise)");
  cmd->add_option("--workers", f.workers, "parallel episodes");
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--set", f.set, "optimizer override key=value (repeatable)");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig exp;
  if (!f.config.empty()) load_config(exp, f.config);
  if (!f.env.empty()) exp.env = f.env;
  if (!f.variants.empty()) {
    exp.variants.clear();
    for (const auto& v : harness::detail::split_list(f.variants)) exp.variants.push_back(parse_variant(v));
  }
  if (!f.budgets.empty()) {
    exp.budgets.clear();
    for (auto b : parse_index_list(f.budgets, "--budgets")) exp.budgets.push_back(b);
  }
  if (!f.seeds.empty()) exp.seeds = parse_index_list(f.seeds, "--seeds");
  if (f.horizon) exp.horizon = *f.horizon;
  if (f.steps) exp.episode_length = *f.steps;
  if (f.beta) exp.beta = *f.beta;
  if (f.workers) exp.workers = *f.workers;
  if (!f.out.empty()) exp.output_path = f.out;
  if (!f.features.empty()) exp.features = harness::detail::split_list(f.features);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    PlannerConfig probe;
    apply_override(probe, harness::detail::trim(kv.substr(0, eq)), harness::detail::trim(kv.substr(eq + 1)));
    exp.overrides[harness::detail::trim(kv.substr(0, eq))] = harness::detail::trim(kv.substr(eq + 1));
  }
  exp.validate();
  return exp;
}

void print_summary(const SweepResult& result) {
  std::printf("%-28s %7s %5s %8s %7s %17s %12s %11s\n", "variant", "budget", "n", "success", "stderr",
              "95% CI (exact)", "reward", "evals/ep");
  for (const auto& s : summarize(result)) {
    const Interval ci = s.interval();
    std::printf("%-28s %7zu %5zu %8.3f %7.3f    [%5.3f, %5.3f] %12.3f %11.1f", s.variant.c_str(), s.budget,
                s.episodes, s.success_rate(), s.standard_error(), ci.lower, ci.upper, s.mean_reward,
                s.mean_evaluations);
    if (s.failures > 0) std::printf("  (%zu failed)", s.failures);
    std::printf("\n");
  }
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      std::fprintf(stderr, "error: %s budget %zu seed %llu: %s\n", row.variant.c_str(), row.budget,
                   static_cast<unsigned long long>(row.seed), row.error.c_str());
    }
  }
}

void emit(const ExperimentConfig& exp, const SweepResult& result) {
  if (!exp.output_path.empty()) write_sweep_csv(exp.output_path, result);
  print_summary(result);
}

int cmd_psd(const ExperimentConfig& exp, const std::string& policy) {
  if (policy != "planner" && policy != "white") throw ValidationError("--policy must be planner or white");
  const AnyEnvironment env = make_environment(exp.env);
  const Variant variant = exp.variants.front();
  const std::size_t budget = exp.budgets.front();
  std::vector<SpectrumEstimate> spectra;
  double exponent_sum = 0.0;
  std::size_t fitted = 0;
  for (auto seed : exp.seeds) {
    std::visit(
        [&](const auto& e) {
          const auto rec = policy == "white"
                               ? run_white_policy_episode(e, exp.steps(), seed)
                               : run_episode(e, exp.planner_config(variant, budget), exp.steps(), seed);
          const ActionSpectrum spec = analyze_action_psd(rec);
          for (const auto& s : spec.per_dimension) spectra.push_back(s);
          if (spec.mean_exponent) {
            exponent_sum += *spec.mean_exponent;
            ++fitted;
          }
          std::printf("seed %llu: exponent %s\n", static_cast<unsigned long long>(seed),
                      spec.mean_exponent ? std::to_string(*spec.mean_exponent).c_str() : "rejected");
        },
        env);
  }
  const SpectrumEstimate mean = average_spectra(spectra);
  if (fitted > 0) {
    std::printf("mean per-episode exponent: %.4f over %zu episodes\n", exponent_sum / fitted, fitted);
  }
  try {
    std::printf("exponent of averaged spectrum: %.4f\n", fit_spectral_exponent(mean));
  } catch (const FitError& e) {
    std::printf("exponent of averaged spectrum: rejected (%s)\n", e.what());
  }
  if (!exp.output_path.empty()) {
    std::ofstream out(exp.output_path);
    write_spectrum_csv(out, mean);
  }
  return 0;
}

int cmd_episode(const ExperimentConfig& exp) {
  const AnyEnvironment env = make_environment(exp.env);
  const Variant variant = exp.variants.front();
  const std::size_t budget = exp.budgets.front();
  const auto seed = exp.seeds.front();
  std::visit(
      [&](const auto& e) {
        const auto rec = run_episode(e, exp.planner_config(variant, budget), exp.steps(), seed);
        std::printf("env %s variant %s budget %zu seed %llu\n", exp.env.c_str(), std::string(to_string(variant)).c_str(),
                    budget, static_cast<unsigned long long>(seed));
        std::printf("steps %zu  cumulative reward %.6f  success %s  evaluations %zu\n", rec.actions.size(),
                    rec.cumulative_reward, rec.success ? "yes" : "no", rec.total_evaluations());
        if (!exp.output_path.empty()) {
          std::ofstream out(exp.output_path);
          out << "step";
          for (Eigen::Index d = 0; d < rec.actions.front().size(); ++d) out << ",action_" << d;
          out << ",reward,evaluations\n";
          for (std::size_t t = 0; t < rec.actions.size(); ++t) {
            out << t;
            for (Eigen::Index d = 0; d < rec.actions[t].size(); ++d) {
              out << ',' << harness::detail::format_double(rec.actions[t][d]);
            }
            out << ',' << harness::detail::format_double(rec.rewards[t]) << ',' << rec.evaluations_per_step[t] << '\n';
          }
        }
      },
      env);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iCEM trajectory optimisation experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* sweep = app.add_subcommand("sweep", "budget sweep over variants x budgets x seeds");
  add_common(sweep, flags);
  auto* ablate = app.add_subcommand("ablate", "iCEM minus one feature and CEM_MPC plus one feature");
  add_common(ablate, flags);
  ablate->add_option("--features", flags.features, "comma list of optimizer flags");
  auto* psd = app.add_subcommand("psd", "power spectrum of executed actions");
  add_common(psd, flags);
  psd->add_option("--policy", flags.policy, "planner (default) or white");
  auto* episode = app.add_subcommand("episode", "run and report a single episode");
  add_common(episode, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig exp = build_config(flags);
    if (sweep->parsed()) {
      emit(exp, run_budget_sweep(exp));
    } else if (ablate->parsed()) {
      emit(exp, run_ablation(exp, exp.features));
    } else if (psd->parsed()) {
      return cmd_psd(exp, flags.policy);
    } else if (episode->parsed()) {
      return cmd_episode(exp);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
