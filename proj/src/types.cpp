#include "advclass/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "advclass/errors.hpp"

namespace advclass {

std::size_t GameSpec::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw InputError("unknown attack vector id: " + std::string(id));
  }
  return it->second;
}

GameSpec make_game_spec(std::vector<AttackVector> vectors,
                        std::vector<double> reward, std::vector<double> noise,
                        double p, double c_d, double c_fa) {
  if (vectors.empty()) throw InputError("game spec needs at least one attack vector");
  if (reward.size() != vectors.size() || noise.size() != vectors.size()) {
    throw InputError("reward/noise must have one entry per attack vector");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ModelError("attacker prior p must lie strictly inside (0,1); the (1-p)/p scaling is degenerate at the endpoints");
  }
  if (!(c_d >= 0.0) || !std::isfinite(c_d)) throw InputError("c_d must be a nonnegative real");
  if (!(c_fa >= 0.0) || !std::isfinite(c_fa)) throw InputError("c_fa must be a nonnegative real");

  GameSpec spec;
  const std::size_t dim = vectors.front().features.size();
  if (dim == 0) throw InputError("attack vectors need feature dimension >= 1");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].features.size() != dim) {
      throw InputError("attack vector '" + vectors[i].id + "' has feature dimension " +
                       std::to_string(vectors[i].features.size()) + ", expected " +
                       std::to_string(dim));
    }
    if (!(reward[i] >= 0.0) || !std::isfinite(reward[i])) {
      throw InputError("reward of '" + vectors[i].id + "' must be a nonnegative real");
    }
    if (!(noise[i] >= 0.0) || noise[i] > 1.0) {
      throw InputError("noise of '" + vectors[i].id + "' must be a probability");
    }
    auto [it, inserted] = spec.index_.emplace(vectors[i].id, i);
    (void)it;
    if (!inserted) throw InputError("duplicate attack vector id: " + vectors[i].id);
  }
  const double mass = std::accumulate(noise.begin(), noise.end(), 0.0);
  if (std::abs(mass - 1.0) > kProbTol) {
    throw InputError("noise distribution sums to " + std::to_string(mass) +
                     ", must be 1 within 1e-12 (inputs are rejected, not renormalized)");
  }
  spec.vectors = std::move(vectors);
  spec.reward = std::move(reward);
  spec.noise = std::move(noise);
  spec.p = p;
  spec.c_d = c_d;
  spec.c_fa = c_fa;
  return spec;
}

bool Classifier::detects(std::string_view id) const {
  return std::binary_search(detect_ids.begin(), detect_ids.end(), id);
}

std::string Classifier::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < detect_ids.size(); ++i) {
    if (i) out += ',';
    out += detect_ids[i];
  }
  out += '}';
  return out;
}

Classifier make_classifier(std::vector<std::string> detect_ids) {
  std::sort(detect_ids.begin(), detect_ids.end());
  detect_ids.erase(std::unique(detect_ids.begin(), detect_ids.end()), detect_ids.end());
  return Classifier{std::move(detect_ids)};
}

Classifier classifier_for(const GameSpec& spec, std::vector<std::string> detect_ids) {
  Classifier c = make_classifier(std::move(detect_ids));
  for (const auto& id : c.detect_ids) spec.index_of(id);
  return c;
}

void check_probability_vector(std::span<const double> w, std::string_view what) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InputError(std::string(what) + ": weights must be nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw InputError(std::string(what) + ": weights sum to " + std::to_string(sum) +
                     ", must be 1 within 1e-12");
  }
}

namespace {

std::vector<double> clamp_weights(std::vector<double> w, std::string_view what) {
  for (double& x : w) {
    if (x < 0.0) {
      if (x < -kProbTol) {
        throw InputError(std::string(what) + ": negative weight " + std::to_string(x));
      }
      x = 0.0;
    }
  }
  return w;
}

}  // namespace

MixedStrategy make_mixed_strategy(std::vector<std::string> labels,
                                  std::vector<double> weights) {
  if (labels.size() != weights.size()) {
    throw InputError("mixed strategy: labels and weights must have equal length");
  }
  if (labels.empty()) throw InputError("mixed strategy: empty strategy set");
  weights = clamp_weights(std::move(weights), "mixed strategy");
  check_probability_vector(weights, "mixed strategy");
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("mixed strategy: duplicate strategy label");
  }
  return MixedStrategy{std::move(labels), std::move(weights)};
}

ClassifierMixture make_classifier_mixture(std::vector<Classifier> classifiers,
                                          std::vector<double> weights) {
  if (classifiers.size() != weights.size()) {
    throw InputError("classifier mixture: classifiers and weights must have equal length");
  }
  if (classifiers.empty()) throw InputError("classifier mixture: empty strategy set");
  weights = clamp_weights(std::move(weights), "classifier mixture");
  check_probability_vector(weights, "classifier mixture");
  return ClassifierMixture{std::move(classifiers), std::move(weights)};
}

std::string reward_label(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InternalError("to_chars failed");
  return std::string(buf, end);
}

}  // namespace advclass
