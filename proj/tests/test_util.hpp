#pragma once

#include <random>
#include <string>
#include <vector>

#include "advclass/game.hpp"
#include "advclass/reduction.hpp"

namespace advclass::testutil {

/// Single-feature spec with ids v0, v1, ...
inline GameSpec simple_spec(std::vector<double> reward, std::vector<double> noise,
                            double p, double c_d, double c_fa) {
  std::vector<AttackVector> vectors;
  for (std::size_t i = 0; i < reward.size(); ++i) {
    vectors.push_back({"v" + std::to_string(i), {static_cast<int>(i)}});
  }
  return make_game_spec(std::move(vectors), std::move(reward), std::move(noise),
                        p, c_d, c_fa);
}

inline ReducedGame simple_reduced(std::vector<double> rewards,
                                  std::vector<double> noise, double p, double c_d,
                                  double c_fa) {
  ReducedGame g;
  g.rewards = std::move(rewards);
  g.noise = std::move(noise);
  g.p = p;
  g.c_d = c_d;
  g.c_fa = c_fa;
  for (std::size_t i = 0; i < g.rewards.size(); ++i) {
    g.sources.push_back({{"v" + std::to_string(i), g.noise[i]}});
  }
  return g;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = dist(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

inline GameSpec random_spec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> reward_dist(0.0, 10.0);
  std::uniform_real_distribution<double> cost_dist(0.1, 8.0);
  std::uniform_real_distribution<double> p_dist(0.1, 0.9);
  std::vector<double> reward(n);
  for (double& r : reward) r = reward_dist(rng);
  return simple_spec(std::move(reward), random_simplex(rng, n), p_dist(rng),
                     cost_dist(rng), cost_dist(rng));
}

/// All 2^|V| classifiers of a spec.
inline std::vector<Classifier> all_classifiers(const GameSpec& spec) {
  const std::size_t n = spec.size();
  std::vector<Classifier> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) ids.push_back(spec.vectors[i].id);
    }
    out.push_back(make_classifier(std::move(ids)));
  }
  return out;
}

inline MixedStrategy full_support_alpha(const GameSpec& spec,
                                        std::vector<double> weights) {
  std::vector<std::string> labels;
  for (const auto& v : spec.vectors) labels.push_back(v.id);
  return make_mixed_strategy(std::move(labels), std::move(weights));
}

}  // namespace advclass::testutil
