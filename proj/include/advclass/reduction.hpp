#pragma once

#include <span>
#include <string>
#include <vector>

#include "advclass/types.hpp"

namespace advclass {

/// Classifies as attacker exactly when the attack reward meets the threshold.
struct ThresholdClassifier {
  double threshold = 0.0;
  bool detects(double reward) const { return reward >= threshold; }
};

/// The reward-level game: distinct rewards sorted ascending, the collapsed
/// non-attacker distribution, the cost parameters, and a back-map to the
/// originating vectors of each level.
struct LevelSource {
  std::string id;
  double noise = 0.0;
};

struct ReducedGame {
  std::vector<double> rewards;  // strictly increasing
  std::vector<double> noise;    // P_N^R aligned with rewards, sums to 1
  double p = 0.0;
  double c_d = 0.0;
  double c_fa = 0.0;
  std::vector<std::vector<LevelSource>> sources;  // per level

  std::size_t size() const { return rewards.size(); }
  double false_alarm_factor() const { return (1.0 - p) / p * c_fa; }
  /// Index of the reward level matching r within the grouping tolerance.
  std::size_t level_of(double r, double rel_tol = kRewardGroupTol) const;

  static constexpr double kRewardGroupTol = 1e-9;
};

/// Collapse equal-reward vectors into reward levels (masses summed, back-map
/// kept). Rewards within rel_tol relative of each other land in one level.
ReducedGame reduce(const GameSpec& spec,
                   double rel_tol = ReducedGame::kRewardGroupTol);

/// pi_d per reward level for a mix over the |V^R|+1 threshold columns
/// (column j = threshold at rewards[j], last column = never classify):
/// cumulative sum of the weights with threshold <= r.
std::vector<double> profile_from_thresholds(const ReducedGame& reduced,
                                            std::span<const double> beta);

/// Telescoping construction: a classifier mix whose detection profile equals the
/// target exactly. Sort vectors by target value; give f(v1) to detect-all,
/// f(v_{i+1})-f(v_i) to the classifier detecting {v_{i+1},...}, and the
/// remainder to detect-none. target is aligned with spec.vectors.
ClassifierMixture mixture_from_profile(const GameSpec& spec,
                                       std::span<const double> target);

/// Recover a full-game attacker strategy from a reduced-game one. Levels with
/// pi_d strictly inside (0,1) give each originating vector the pinned weight
/// (1-p)/p * (c_fa/c_d) * P_N(v); their sum must match alpha_r within 1e-10
/// or the input was not an equilibrium. Levels with pi_d in {0,1} split the
/// level mass proportionally to P_N within the level.
MixedStrategy expand_alpha(const ReducedGame& reduced,
                           std::span<const double> alpha_r,
                           std::span<const double> pd_levels);

/// Labelled views of reduced-game strategies.
MixedStrategy reward_strategy(const ReducedGame& reduced,
                              std::span<const double> alpha);
MixedStrategy threshold_strategy(const ReducedGame& reduced,
                                 std::span<const double> beta);

}  // namespace advclass
