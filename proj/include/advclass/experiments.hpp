#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advclass/oracle.hpp"
#include "advclass/solver.hpp"

namespace advclass {

/// Single-feature noise model: the non-attacker hits the target k times out
/// of N with probability theta0 per trial; reward grows by c_a per hit.
struct BinomialNoiseSpec {
  int trials = 1;          // N
  double theta0 = 0.5;     // success probability, strictly inside (0,1)
  double reward_unit = 1;  // c_a
};

/// Binomial pmf via the multiplicative recurrence
/// pmf(k+1) = pmf(k) * ((N-k)/(k+1)) * (theta/(1-theta)).
std::vector<double> binomial_pmf(int trials, double theta);

/// Reward levels 0, c_a, ..., N*c_a with binomial noise; the zero-reward
/// level is included (its noise mass keeps mu strictly decreasing).
ReducedGame binomial_game(const BinomialNoiseSpec& noise, double p, double c_d,
                          double c_fa);

enum class SweepParameter { kAttackUnit, kFalseAlarmCost, kDetectionCost, kPrior, kTheta0 };
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;  // set when ok == false; the sweep continues past bad rows
  std::size_t k = 0;
  double attacker_lo = 0.0;
  double attacker_hi = 0.0;
  double attacker_mid = 0.0;
  double defender = 0.0;
  bool verified = false;
  EquilibriumSet eq;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::kFalseAlarmCost;
  std::vector<SweepRow> rows;  // aligned with the parameter grid
};

/// One solve per grid point; rows whose parameter value breaks a model
/// assumption become error rows. Rows are independent; the parallel kernel
/// and the serial reference produce identical results ordered by grid index.
SweepResult sweep(const ReducedGame& base, SweepParameter parameter,
                  std::span<const double> grid, double epsilon = 1.0);
SweepResult sweep_serial(const ReducedGame& base, SweepParameter parameter,
                         std::span<const double> grid, double epsilon = 1.0);

/// The four-scenario two-feature study. Feature 1 counts hits on the valuable
/// target (0..N, binomial theta0); feature 2 is the inactive-pct class, low
/// with probability theta_low for the non-attacker. Rewards:
/// hits * reward_unit + (low_bonus | high_bonus).
struct MultiFeatureParams {
  int trials = 2;
  double reward_unit = 1.0;  // c_a
  double low_bonus = 2.0;    // c_low
  double high_bonus = 4.1;   // c_high
  double p = 0.2;
  double theta0 = 0.3;
  double theta_low = 0.8;
  double c_d = 1.0;
  double c_fa = 1.0;
};

struct ScenarioResult {
  int scenario = 0;
  MixedStrategy attacker;
  MixedStrategy defender;
  double attacker_payoff = 0.0;
  double defender_payoff = 0.0;
};

/// Scenario 1: NE of the feature-1-only game (attacker restricted to
/// high-inactive-pct vectors, defender thresholds on the feature-1 reward
/// against the full binomial marginal). Scenario 2: defender best-responds
/// over all 2^6 classifiers to the scenario-1 attacker. Scenario 3: attacker
/// best-responds to the scenario-2 classifier. Scenario 4: NE of the full
/// six-vector game.
std::vector<ScenarioResult> multi_feature_study(const MultiFeatureParams& params = {});

/// The full six-vector spec of the study (exposed for tests and the CLI).
GameSpec multi_feature_spec(const MultiFeatureParams& params);

}  // namespace advclass
