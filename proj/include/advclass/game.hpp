#pragma once

#include <span>
#include <string_view>

#include "advclass/types.hpp"

namespace advclass {

struct PayoffPair {
  double attacker = 0.0;
  double defender = 0.0;
};

/// Payoffs of the pure profile (v, c).
/// Attacker: R(v) - c_d if detected, else R(v).
/// Defender: -attacker - (1-p)/p * c_fa * P_N(detect set).
PayoffPair pure_payoffs(const GameSpec& spec, std::string_view vector_id,
                        const Classifier& c);

/// Expected payoffs of (alpha, beta), evaluated as the full bilinear double
/// sum over vector x classifier. alpha labels are vector ids (support subset
/// allowed).
PayoffPair mixed_payoffs(const GameSpec& spec, const MixedStrategy& alpha,
                         const ClassifierMixture& beta);

/// Same expectation computed through the detection-probability function:
/// attacker = sum_v alpha_v (R(v) - c_d pi_d(v)),
/// defender = -attacker - (1-p)/p c_fa sum_v P_N(v) pi_d(v).
/// Kept as an independent code path; the two must agree within 1e-10.
PayoffPair mixed_payoffs_via_profile(const GameSpec& spec,
                                     const MixedStrategy& alpha,
                                     const ClassifierMixture& beta);

/// pi_d per vector (aligned with spec.vectors) induced by a classifier mix.
std::vector<double> detection_profile(const GameSpec& spec,
                                      const ClassifierMixture& beta);

/// The defender's best pure classifier against alpha: detect exactly the
/// vectors whose detection gain c_d*alpha_v strictly exceeds the false-alarm
/// loss (1-p)/p*c_fa*P_N(v). Ties within 1e-12 resolve to NOT detect.
Classifier defender_best_response(const GameSpec& spec, const MixedStrategy& alpha);

/// The attacker's best pure vector against beta: argmax of R(v) - c_d pi_d(v).
/// Ties break toward the lowest reward, then the lexicographically lowest id.
const AttackVector& attacker_best_response(const GameSpec& spec,
                                           const ClassifierMixture& beta);

/// Dense alpha over all spec vectors from a support-labelled strategy.
std::vector<double> alpha_by_index(const GameSpec& spec, const MixedStrategy& alpha);

}  // namespace advclass
