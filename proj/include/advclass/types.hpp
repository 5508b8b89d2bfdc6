#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace advclass {

inline constexpr double kProbTol = 1e-12;  // probability normalization tolerance

/// One pure strategy of the attacker: a complete multi-feature description of
/// observable behavior. Feature dimension must match across a spec.
struct AttackVector {
  std::string id;
  std::vector<int> features;
};

/// The full classification game: attack vectors, the attacker's reward per
/// vector, the non-attacker's distribution, and the cost parameters.
///
/// Immutable after construction; build through make_game_spec, which
/// validates. p must lie strictly inside (0,1): the (1-p)/p scaling is
/// undefined or degenerate at the endpoints. Noise entries may be zero here;
/// only the closed-form solver requires them strictly positive.
struct GameSpec {
  std::vector<AttackVector> vectors;
  std::vector<double> reward;  // aligned with vectors, all >= 0
  std::vector<double> noise;   // aligned, sums to 1 within kProbTol
  double p = 0.0;
  double c_d = 0.0;
  double c_fa = 0.0;

  std::size_t size() const { return vectors.size(); }
  std::size_t index_of(std::string_view id) const;  // throws InputError
  double false_alarm_factor() const { return (1.0 - p) / p * c_fa; }

 private:
  friend GameSpec make_game_spec(std::vector<AttackVector>, std::vector<double>,
                                 std::vector<double>, double, double, double);
  std::unordered_map<std::string, std::size_t> index_;
};

GameSpec make_game_spec(std::vector<AttackVector> vectors,
                        std::vector<double> reward, std::vector<double> noise,
                        double p, double c_d, double c_fa);

/// A deterministic classification rule, represented by its detect set
/// (the preimage of "attacker").
struct Classifier {
  std::vector<std::string> detect_ids;  // sorted, unique

  bool detects(std::string_view id) const;
  std::string label() const;  // "{}" for detect-none
};

Classifier make_classifier(std::vector<std::string> detect_ids);
Classifier classifier_for(const GameSpec& spec,
                          std::vector<std::string> detect_ids);  // validates ids

/// A probability vector over a named, ordered strategy set. Labels identify
/// strategies in whatever space the context defines (vector ids, reward
/// levels, thresholds).
struct MixedStrategy {
  std::vector<std::string> labels;
  std::vector<double> weights;

  std::size_t size() const { return labels.size(); }
};

/// Validates: aligned lengths, unique labels, weights >= 0 (negatives within
/// kProbTol are clamped to zero, anything lower is rejected), sum 1 within
/// kProbTol. Out-of-tolerance inputs are rejected, never renormalized.
MixedStrategy make_mixed_strategy(std::vector<std::string> labels,
                                  std::vector<double> weights);

/// A mixed strategy over explicit classifiers.
struct ClassifierMixture {
  std::vector<Classifier> classifiers;
  std::vector<double> weights;

  std::size_t size() const { return classifiers.size(); }
};

ClassifierMixture make_classifier_mixture(std::vector<Classifier> classifiers,
                                          std::vector<double> weights);

/// Shortest decimal string that parses back to exactly the same double.
std::string reward_label(double value);

inline constexpr const char* kNeverLabel = "never";

/// Weight-vector sanity used internally: nonnegative within kProbTol and
/// unit sum within kProbTol. Throws InputError when violated.
void check_probability_vector(std::span<const double> w, std::string_view what);

}  // namespace advclass
