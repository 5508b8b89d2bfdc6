#include "advclass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "advclass/errors.hpp"
#include "advclass/game.hpp"

namespace advclass {

namespace {

int max_threads() {
#ifdef _OPENMP
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("ADVCLASS_NE_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) cap = std::min(cap, parsed);
  }
  return cap;
#else
  return 1;
#endif
}

}  // namespace

std::vector<double> binomial_pmf(int trials, double theta) {
  if (trials < 1) throw InputError("binomial trials must be >= 1");
  if (!(theta > 0.0) || !(theta < 1.0)) {
    throw ModelError(
        "theta must lie strictly inside (0,1): the boundary puts zero noise "
        "mass on some reward level and breaks strict mu monotonicity");
  }
  std::vector<double> pmf(static_cast<std::size_t>(trials) + 1);
  pmf[0] = std::pow(1.0 - theta, trials);
  const double odds = theta / (1.0 - theta);
  for (int k = 0; k < trials; ++k) {
    pmf[k + 1] = pmf[k] * (static_cast<double>(trials - k) / (k + 1)) * odds;
  }
  return pmf;
}

ReducedGame binomial_game(const BinomialNoiseSpec& noise, double p, double c_d,
                          double c_fa) {
  if (!(noise.reward_unit > 0.0)) throw InputError("reward unit c_a must be positive");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ModelError("attacker prior p must lie strictly inside (0,1)");
  }
  ReducedGame g;
  g.noise = binomial_pmf(noise.trials, noise.theta0);
  g.p = p;
  g.c_d = c_d;
  g.c_fa = c_fa;
  for (int i = 0; i <= noise.trials; ++i) {
    g.rewards.push_back(i * noise.reward_unit);
    g.sources.push_back({{std::to_string(i), g.noise[static_cast<std::size_t>(i)]}});
  }
  return g;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  if (name == "c_a") return SweepParameter::kAttackUnit;
  if (name == "c_fa") return SweepParameter::kFalseAlarmCost;
  if (name == "c_d") return SweepParameter::kDetectionCost;
  if (name == "p") return SweepParameter::kPrior;
  if (name == "theta0") return SweepParameter::kTheta0;
  return std::nullopt;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kAttackUnit: return "c_a";
    case SweepParameter::kFalseAlarmCost: return "c_fa";
    case SweepParameter::kDetectionCost: return "c_d";
    case SweepParameter::kPrior: return "p";
    case SweepParameter::kTheta0: return "theta0";
  }
  return "?";
}

namespace {

ReducedGame apply_parameter(const ReducedGame& base, SweepParameter parameter,
                            double value) {
  ReducedGame g = base;
  switch (parameter) {
    case SweepParameter::kAttackUnit: {
      if (!(value > 0.0)) throw InputError("c_a must be positive");
      // Rewards depend on c_a: regenerate r_i = i * c_a.
      for (std::size_t i = 0; i < g.rewards.size(); ++i) {
        g.rewards[i] = static_cast<double>(i) * value;
      }
      break;
    }
    case SweepParameter::kFalseAlarmCost:
      g.c_fa = value;
      break;
    case SweepParameter::kDetectionCost:
      g.c_d = value;
      break;
    case SweepParameter::kPrior:
      if (!(value > 0.0) || !(value < 1.0)) {
        throw ModelError("attacker prior p must lie strictly inside (0,1)");
      }
      g.p = value;
      break;
    case SweepParameter::kTheta0: {
      const int trials = static_cast<int>(g.size()) - 1;
      const std::vector<double> pmf = binomial_pmf(trials, value);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double old_mass = g.noise[i];
        for (auto& src : g.sources[i]) {
          src.noise = old_mass > 0.0 ? src.noise * (pmf[i] / old_mass) : pmf[i];
        }
        g.noise[i] = pmf[i];
      }
      break;
    }
  }
  return g;
}

SweepRow solve_row(const ReducedGame& base, SweepParameter parameter,
                   double value, double epsilon) {
  SweepRow row;
  row.value = value;
  try {
    const ReducedGame g = apply_parameter(base, parameter, value);
    row.eq = compute_all_ne(g, epsilon);
    row.ok = true;
    row.k = row.eq.k;
    row.attacker_lo = row.eq.attacker_lo;
    row.attacker_hi = row.eq.attacker_hi;
    row.attacker_mid = 0.5 * (row.eq.attacker_lo + row.eq.attacker_hi);
    row.defender = row.eq.defender_value;
    row.verified = true;
    for (const auto& alpha : row.eq.alpha_vertices) {
      for (const auto& beta : row.eq.beta_vertices) {
        row.verified = row.verified && verify_ne(g, alpha, beta, 1e-9).passed;
      }
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepResult sweep_serial(const ReducedGame& base, SweepParameter parameter,
                         std::span<const double> grid, double epsilon) {
  SweepResult out;
  out.parameter = parameter;
  out.rows.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.rows[i] = solve_row(base, parameter, grid[i], epsilon);
  }
  return out;
}

SweepResult sweep(const ReducedGame& base, SweepParameter parameter,
                  std::span<const double> grid, double epsilon) {
  SweepResult out;
  out.parameter = parameter;
  out.rows.resize(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
#endif
  for (long long i = 0; i < static_cast<long long>(grid.size()); ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    out.rows[u] = solve_row(base, parameter, grid[u], epsilon);
  }
  return out;
}

GameSpec multi_feature_spec(const MultiFeatureParams& params) {
  if (!(params.theta_low > 0.0) || !(params.theta_low < 1.0)) {
    throw ModelError(
        "theta_low must lie strictly inside (0,1): the boundary puts zero "
        "noise mass on one inactive-pct class");
  }
  const std::vector<double> marginal = binomial_pmf(params.trials, params.theta0);
  std::vector<AttackVector> vectors;
  std::vector<double> reward;
  std::vector<double> noise;
  for (int i = 0; i <= params.trials; ++i) {
    const std::string hits = std::to_string(i);
    vectors.push_back({hits + "-low", {i, 0}});
    reward.push_back(i * params.reward_unit + params.low_bonus);
    noise.push_back(marginal[static_cast<std::size_t>(i)] * params.theta_low);
    vectors.push_back({hits + "-high", {i, 1}});
    reward.push_back(i * params.reward_unit + params.high_bonus);
    noise.push_back(marginal[static_cast<std::size_t>(i)] * (1.0 - params.theta_low));
  }
  return make_game_spec(std::move(vectors), std::move(reward), std::move(noise),
                        params.p, params.c_d, params.c_fa);
}

std::vector<ScenarioResult> multi_feature_study(const MultiFeatureParams& params) {
  const GameSpec spec = multi_feature_spec(params);
  const std::vector<double> marginal = binomial_pmf(params.trials, params.theta0);

  // Scenario 1: the defender sees only feature 1, so she thresholds on the
  // feature-1 reward of the vectors the attacker actually uses (the high
  // inactive-pct ones; low only lowers reward at equal detection odds). The
  // non-attacker marginal over feature 1 is the full binomial: the low/high
  // split is invisible to a feature-1-only classifier.
  ReducedGame s1;
  s1.p = params.p;
  s1.c_d = params.c_d;
  s1.c_fa = params.c_fa;
  s1.noise = marginal;
  for (int i = 0; i <= params.trials; ++i) {
    s1.rewards.push_back(i * params.reward_unit + params.high_bonus);
    s1.sources.push_back(
        {{std::to_string(i) + "-high", marginal[static_cast<std::size_t>(i)]}});
  }
  const EquilibriumSet eq1 = compute_all_ne(s1);
  const std::vector<double>& alpha1 = eq1.representative_alpha();

  std::vector<std::string> labels1;
  std::vector<double> weights1;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    labels1.push_back(s1.sources[i].front().id);
    weights1.push_back(alpha1[i]);
  }
  const MixedStrategy attacker1 = make_mixed_strategy(labels1, weights1);

  std::vector<ScenarioResult> out;
  {
    ScenarioResult r;
    r.scenario = 1;
    r.attacker = attacker1;
    r.defender = threshold_strategy(s1, eq1.beta_vertices.back());
    r.defender_payoff = eq1.defender_value;
    r.attacker_payoff = 0.5 * (eq1.attacker_lo + eq1.attacker_hi);
    out.push_back(std::move(r));
  }

  // Scenario 2: full-featured defender best-responds to the scenario-1 attacker.
  const Classifier c2 = defender_best_response(spec, attacker1);
  const ClassifierMixture beta2 = make_classifier_mixture({c2}, {1.0});
  {
    const PayoffPair pay = mixed_payoffs(spec, attacker1, beta2);
    ScenarioResult r;
    r.scenario = 2;
    r.attacker = attacker1;
    r.defender = make_mixed_strategy({c2.label()}, {1.0});
    r.attacker_payoff = pay.attacker;
    r.defender_payoff = pay.defender;
    out.push_back(std::move(r));
  }

  // Scenario 3: the attacker counter-responds to the scenario-2 classifier.
  const AttackVector& v3 = attacker_best_response(spec, beta2);
  {
    const PayoffPair pay = pure_payoffs(spec, v3.id, c2);
    ScenarioResult r;
    r.scenario = 3;
    r.attacker = make_mixed_strategy({v3.id}, {1.0});
    r.defender = make_mixed_strategy({c2.label()}, {1.0});
    r.attacker_payoff = pay.attacker;
    r.defender_payoff = pay.defender;
    out.push_back(std::move(r));
  }

  // Scenario 4: common knowledge of both features; full-game NE.
  const ReducedGame reduced4 = reduce(spec);
  const EquilibriumSet eq4 = compute_all_ne(reduced4);
  {
    const std::vector<double>& beta4 = eq4.beta_vertices.back();
    const std::vector<double> pd = profile_from_thresholds(reduced4, beta4);
    ScenarioResult r;
    r.scenario = 4;
    r.attacker = expand_alpha(reduced4, eq4.representative_alpha(), pd);
    r.defender = threshold_strategy(reduced4, beta4);
    r.defender_payoff = eq4.defender_value;
    r.attacker_payoff = 0.5 * (eq4.attacker_lo + eq4.attacker_hi);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace advclass
