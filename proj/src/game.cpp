#include "advclass/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "advclass/errors.hpp"

namespace advclass {

namespace {

double false_alarm_mass(const GameSpec& spec, const Classifier& c) {
  double mass = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (c.detects(spec.vectors[i].id)) mass += spec.noise[i];
  }
  return mass;
}

}  // namespace

std::vector<double> alpha_by_index(const GameSpec& spec, const MixedStrategy& alpha) {
  std::vector<double> dense(spec.size(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    dense[spec.index_of(alpha.labels[i])] += alpha.weights[i];
  }
  return dense;
}

PayoffPair pure_payoffs(const GameSpec& spec, std::string_view vector_id,
                        const Classifier& c) {
  const std::size_t v = spec.index_of(vector_id);
  const double ua =
      spec.reward[v] - (c.detects(spec.vectors[v].id) ? spec.c_d : 0.0);
  const double ud = -ua - spec.false_alarm_factor() * false_alarm_mass(spec, c);
  return {ua, ud};
}

PayoffPair mixed_payoffs(const GameSpec& spec, const MixedStrategy& alpha,
                         const ClassifierMixture& beta) {
  PayoffPair out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const PayoffPair p =
          pure_payoffs(spec, alpha.labels[i], beta.classifiers[j]);
      const double w = alpha.weights[i] * beta.weights[j];
      out.attacker += w * p.attacker;
      out.defender += w * p.defender;
    }
  }
  return out;
}

std::vector<double> detection_profile(const GameSpec& spec,
                                      const ClassifierMixture& beta) {
  std::vector<double> pd(spec.size(), 0.0);
  for (std::size_t j = 0; j < beta.size(); ++j) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (beta.classifiers[j].detects(spec.vectors[i].id)) {
        pd[i] += beta.weights[j];
      }
    }
  }
  return pd;
}

PayoffPair mixed_payoffs_via_profile(const GameSpec& spec,
                                     const MixedStrategy& alpha,
                                     const ClassifierMixture& beta) {
  const std::vector<double> pd = detection_profile(spec, beta);
  const std::vector<double> a = alpha_by_index(spec, alpha);
  double ua = 0.0;
  double fa = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    ua += a[i] * (spec.reward[i] - spec.c_d * pd[i]);
    fa += spec.noise[i] * pd[i];
  }
  return {ua, -ua - spec.false_alarm_factor() * fa};
}

Classifier defender_best_response(const GameSpec& spec, const MixedStrategy& alpha) {
  const std::vector<double> a = alpha_by_index(spec, alpha);
  std::vector<std::string> detect;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double gain = spec.c_d * a[i];
    const double loss = spec.false_alarm_factor() * spec.noise[i];
    // Equality within 1e-12 classifies as non-attacker.
    if (gain - loss > kProbTol) detect.push_back(spec.vectors[i].id);
  }
  return make_classifier(std::move(detect));
}

const AttackVector& attacker_best_response(const GameSpec& spec,
                                           const ClassifierMixture& beta) {
  const std::vector<double> pd = detection_profile(spec, beta);
  std::size_t best = 0;
  double best_payoff = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double payoff = spec.reward[i] - spec.c_d * pd[i];
    bool better = payoff > best_payoff;
    if (!better && payoff == best_payoff) {
      // Tie: lowest reward first, then lowest id.
      better = spec.reward[i] < spec.reward[best] ||
               (spec.reward[i] == spec.reward[best] &&
                spec.vectors[i].id < spec.vectors[best].id);
    }
    if (better) {
      best = i;
      best_payoff = payoff;
    }
  }
  return spec.vectors[best];
}

}  // namespace advclass
