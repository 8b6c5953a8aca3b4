// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "icem/envs/integrator.hpp"
#include "icem/envs/pendulum.hpp"
#include "icem/harness/csv.hpp"
#include "icem/harness/psd_analysis.hpp"
#include "icem/harness/schedule.hpp"
#include "icem/harness/stats.hpp"
#include "icem/harness/sweep.hpp"
#include "icem/noise.hpp"
#include "icem/optimizer.hpp"
#include "icem/planner.hpp"
#include "icem/spectrum.hpp"

namespace {

using namespace icem;
using namespace icem::harness;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] %2d %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::VectorXd row_vector(const ActionSequence& m, Eigen::Index r) { return m.row(r).transpose(); }

// 1
Outcome spectral_law() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  std::mt19937_64 rng(2024);
  for (double beta : {0.0, 1.0, 2.0, 3.5}) {
    const ActionSequence block = sample_colored(NoiseSpec{beta, 64, 2048}, rng);
    double sum = 0.0;
    for (Eigen::Index r = 0; r < 64; ++r) sum += fit_spectral_exponent(estimate_psd(row_vector(block, r)));
    const double slope = sum / 64.0;
    ok = ok && std::abs(slope + beta) <= 0.15;
    detail += fmt("b=%.1f:%.3f ", beta, slope);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 5.0, detail + "(tol 0.15, < 5 s)"};
}

// 2
Outcome integration_law() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  std::mt19937_64 rng(7);
  for (double beta : {0.0, 1.0}) {
    const ActionSequence block = sample_colored(NoiseSpec{beta, 64, 2048}, rng);
    double sum = 0.0;
    for (Eigen::Index r = 0; r < 64; ++r) {
      Eigen::VectorXd walk(2048);
      double acc = 0.0;
      for (Eigen::Index t = 0; t < 2048; ++t) walk[t] = acc += block(r, t);
      const double first = walk[0], last = walk[2047];
      for (Eigen::Index t = 0; t < 2048; ++t) walk[t] -= first + (last - first) * static_cast<double>(t) / 2047.0;
      sum += fit_spectral_exponent(estimate_psd(walk));
    }
    const double slope = sum / 64.0;
    ok = ok && std::abs(slope + beta + 2.0) <= 0.3;
    detail += fmt("b=%.0f:%.3f(want %.0f) ", beta, slope, -(beta + 2.0));
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 5.0, detail + "(tol 0.3, < 5 s)"};
}

// 3: vanilla CEM written out step by step, independent of run_optimization.
struct ReferenceIteration {
  std::vector<std::size_t> elites;
  Eigen::MatrixXd mean, std;
};

std::vector<ReferenceIteration> reference_cem(const std::function<double(const Eigen::MatrixXd&)>& f, int d, int h,
                                              int n, int k, int iterations, double sigma0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(d, h);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(d, h, sigma0);
  std::vector<ReferenceIteration> out;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Eigen::MatrixXd> samples;
    std::vector<double> cost;
    for (int s = 0; s < n; ++s) {
      Eigen::MatrixXd x(d, h);
      for (int r = 0; r < d; ++r) {
        for (int t = 0; t < h; ++t) x(r, t) = mu(r, t) + sigma(r, t) * standard_normal(rng);
      }
      cost.push_back(f(x));
      samples.push_back(x);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    order.resize(k);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, h);
    for (auto i : order) m += samples[i];
    m /= k;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, h);
    for (auto i : order) v += (samples[i] - m).cwiseAbs2();
    v /= k;
    mu = m;
    sigma = v.cwiseSqrt();
    out.push_back({order, mu, sigma});
  }
  return out;
}

Outcome s1_equivalence() {
  const auto t0 = Clock::now();
  const int d = 2, h = 12, n = 60, k = 8, iterations = 5;
  auto f = [](const Eigen::MatrixXd& x) {
    double c = 0.0;
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      c += std::pow(x(0, t) - 0.3 * std::sin(0.5 * t), 2) + std::pow(x(1, t) + 0.2, 2) + 0.1 * x(0, t) * x(1, t);
    }
    return c;
  };
  const auto ref = reference_cem(f, d, h, n, k, iterations, 0.5, 31337);

  OptimizerConfig cfg;
  cfg.num_samples = n;
  cfg.elites = k;
  cfg.iterations = iterations;
  cfg.alpha = 0.0;
  cfg.truncated_sampling = true;
  const ActionBounds bounds = ActionBounds::symmetric(d, 1e6);
  std::mt19937_64 rng(31337);
  const auto res = run_optimization(f, SamplingDistribution::constant(bounds.midpoint(), 0.5, h), {}, cfg, bounds, rng);

  bool ok = res.trace.size() == ref.size();
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < ref.size(); ++i) {
    ok = ok && res.trace[i].elite_indices == ref[i].elites;
    worst = std::max({worst, (res.trace[i].distribution.mean - ref[i].mean).cwiseAbs().maxCoeff(),
                      (res.trace[i].distribution.std - ref[i].std).cwiseAbs().maxCoeff()});
  }
  const double secs = seconds_since(t0);
  ok = ok && worst <= 1e-12 && secs < 1.0;
  return {ok, fmt("elite indices %s, max refit diff %.2e (tol 1e-12, < 1 s)", ok ? "identical" : "checked", worst)};
}

// 4
Outcome table_fidelity() {
  struct Row {
    std::size_t budget, icem_it, icem_n, cem_it, cem_n;
  };
  const Row rows[] = {
      {50, 2, 25, 2, 25},     {70, 2, 40, 2, 35},     {100, 3, 40, 2, 50},    {150, 3, 60, 2, 75},
      {200, 4, 65, 3, 66},    {250, 4, 85, 3, 83},    {300, 4, 100, 3, 100},  {400, 5, 120, 4, 100},
      {500, 5, 150, 4, 125},  {1000, 6, 270, 4, 250}, {2000, 8, 480, 6, 333}, {4000, 10, 900, 8, 500},
  };
  int matched = 0;
  for (const auto& r : rows) {
    matched += budget_to_schedule(r.budget, Variant::icem) == Schedule{r.icem_it, r.icem_n};
    matched += budget_to_schedule(r.budget, Variant::cem_mpc) == Schedule{r.cem_it, r.cem_n};
  }
  return {matched == 24, fmt("%d/24 pairs exact", matched)};
}

// 5: gamma = 5/4, so floor(N / gamma^i) = N 4^i div 5^i in exact integers.
Outcome decay_formula() {
  OptimizerConfig cfg;
  cfg.elites = 10;
  cfg.gamma = 1.25;
  cfg.decay = true;
  std::size_t checked = 0, wrong = 0;
  for (std::uint64_t n = 50; n <= 4000; ++n) {
    cfg.num_samples = n;
    std::uint64_t p4 = 1, p5 = 1;
    for (std::size_t i = 0; i <= 10; ++i, p4 *= 4, p5 *= 5) {
      ++checked;
      wrong += population_size(i, cfg) != std::max<std::uint64_t>(n * p4 / p5, 2 * cfg.elites);
    }
  }
  return {wrong == 0, fmt("%zu cases, %zu mismatches", checked, wrong)};
}

// 6
Outcome exploration() {
  const auto t0 = Clock::now();
  const IntegratorEnv env;
  auto mean_disp = [&](double beta) {
    double total = 0.0;
    for (int seed = 0; seed < 256; ++seed) {
      std::mt19937_64 rng(seed);
      ActionSequence a = sample_colored(NoiseSpec{beta, 2, 200}, rng);
      env.action_bounds().clamp(a);
      Eigen::Vector2d x = env.initial_state();
      for (Eigen::Index t = 0; t < 200; ++t) x = env.step(x, a.col(t));
      total += x.norm();
    }
    return total / 256.0;
  };
  const double white = mean_disp(0.0), red = mean_disp(2.0);
  const double secs = seconds_since(t0);
  return {red >= 1.5 * white && secs < 10.0,
          fmt("white %.3f, beta=2 %.3f, ratio %.2f (need >= 1.5, < 10 s)", white, red, red / white)};
}

ExperimentConfig point_mass_sweep() {
  ExperimentConfig exp;
  exp.env = "point_mass_sparse";
  exp.variants = {Variant::icem, Variant::cem_mpc};
  exp.budgets = {50, 100, 300};
  exp.seeds.resize(50);
  std::iota(exp.seeds.begin(), exp.seeds.end(), std::uint64_t{0});
  return exp;
}

SweepResult sweep_result;

// 7
Outcome sample_efficiency() {
  const auto t0 = Clock::now();
  const ExperimentConfig exp = point_mass_sweep();
  sweep_result = run_budget_sweep(exp);
  const auto summary = summarize(sweep_result);
  auto cell = [&](const char* v, std::size_t b) { return *find_summary(summary, v, b); };
  const double icem100 = cell("icem", 100).success_rate();
  const double mpc300 = cell("cem_mpc", 300).success_rate();
  bool ok = icem100 >= mpc300;
  std::string detail = fmt("icem@100 %.2f vs cem_mpc@300 %.2f; icem", icem100, mpc300);
  const std::size_t budgets[] = {50, 100, 300};
  for (std::size_t j = 0; j < 3; ++j) {
    const auto c = cell("icem", budgets[j]);
    detail += fmt(" %.2f", c.success_rate());
    if (j + 1 < 3) ok = ok && cell("icem", budgets[j + 1]).success_rate() >= c.success_rate() - c.standard_error();
    ok = ok && c.failures == 0 && c.success_rate() >= cell("cem_mpc", budgets[j]).success_rate();
  }
  detail += "; cem_mpc";
  for (std::size_t b : budgets) detail += fmt(" %.2f", cell("cem_mpc", b).success_rate());
  const double secs = seconds_since(t0);
  return {ok && secs < 600.0, detail + " (50 seeds)"};
}

// 8
Outcome ablation_direction() {
  ExperimentConfig exp = point_mass_sweep();
  exp.budgets = {100};
  const auto summary = summarize(run_ablation(exp, {"colored_noise"}));
  const auto full = *find_summary(summary, "icem", 100);
  const auto ablated = *find_summary(summary, "icem-colored_noise", 100);
  const double p1 = full.success_rate(), p2 = ablated.success_rate();
  const double se = std::sqrt(p1 * (1 - p1) / full.episodes + p2 * (1 - p2) / ablated.episodes);
  return {p1 - p2 > se, fmt("icem %.2f, without colored noise %.2f, difference %.2f > SE %.3f", p1, p2, p1 - p2, se)};
}

// 9
Outcome action_spectrum() {
  const PendulumEnv env;
  PlannerConfig cfg = PlannerConfig::preset(Variant::icem, 2.0);
  const Schedule s = budget_to_schedule(300, Variant::icem);
  cfg.optimizer.iterations = s.iterations;
  cfg.optimizer.num_samples = s.num_samples;
  const int seeds = 20;
  const std::size_t steps = 150;
  double planner = 0.0, white = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    planner += analyze_action_psd(run_episode(env, cfg, steps, seed)).mean_exponent.value();
    white += analyze_action_psd(run_white_policy_episode(env, steps, seed)).mean_exponent.value();
  }
  planner /= seeds;
  white /= seeds;
  return {planner <= -0.5 && std::abs(white) <= 0.3,
          fmt("icem executed actions %.3f (need <= -0.5), white policy %.3f (need 0 +- 0.3)", planner, white)};
}

// 10
Outcome determinism() {
  ExperimentConfig exp = point_mass_sweep();
  exp.workers = std::max<std::size_t>(1, exp.workers / 2 + 1);
  if (sweep_result.rows.empty()) sweep_result = run_budget_sweep(point_mass_sweep());
  const SweepResult again = run_budget_sweep(exp);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < sweep_result.rows.size(); ++i) {
    differ += i >= again.rows.size() || format_row(sweep_result.rows[i]) != format_row(again.rows[i]);
  }
  const bool ok = differ == 0 && again.rows.size() == sweep_result.rows.size();
  return {ok, fmt("%zu cells re-run, %zu CSV rows differ", sweep_result.rows.size(), differ)};
}

}  // namespace

int main() {
  report(1, "spectral law", spectral_law);
  report(2, "integration law", integration_law);
  report(3, "vanilla CEM trace", s1_equivalence);
  report(4, "budget table", table_fidelity);
  report(5, "population decay", decay_formula);
  report(6, "colored-noise exploration", exploration);
  report(7, "sample efficiency", sample_efficiency);
  report(8, "colored-noise ablation", ablation_direction);
  report(9, "executed-action spectrum", action_spectrum);
  report(10, "determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
