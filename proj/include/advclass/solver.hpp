#pragma once

#include <compare>
#include <cstddef>
#include <string_view>
#include <vector>

#include "advclass/lp.hpp"
#include "advclass/reduction.hpp"

namespace advclass {

/// Cost/payoff machinery of the reduced game. Column j < |V^R| is the
/// threshold-at-rewards[j] classifier, the last column never classifies.
/// lambda = lambda_tilde + (r_max + epsilon), entrywise, so it is strictly
/// positive; mu[i] is the defender's cumulative false-alarm penalty, with
/// mu.back() == 0 for the never-classify column.
struct GameMatrices {
  Matrix lambda_tilde;  // |V^R| x (|V^R|+1)
  Matrix lambda;        // same shape, strictly positive
  double epsilon = 1.0;
  std::vector<double> mu;  // length |V^R|+1, strictly decreasing then 0
  double shift = 0.0;      // r_max + epsilon

  std::size_t levels() const { return lambda.rows; }
};

GameMatrices build_matrices(const ReducedGame& reduced, double epsilon);

/// Three-way comparison with relative tolerance:
/// equivalent iff |a-b| <= tol * max(1, |a|, |b|).
std::weak_ordering tie_compare(double a, double b, double tol = 1e-9);

/// One candidate support vertex of the defender LP.
/// s is the 0-based start of the tight-constraint block; type 1 puts the
/// remaining mass on beta[s], type 2 on the never-classify column.
struct BetaCandidate {
  bool feasible = false;
  std::size_t s = 0;
  int type = 0;
  double remainder = 0.0;
  double value = 0.0;  // min[lambda beta] - mu'beta, includes the +shift offset
  std::vector<double> beta;
};

BetaCandidate compute_beta(const ReducedGame& reduced, const GameMatrices& m,
                           std::size_t s, int type);

/// Feasibility and value of one support candidate, evaluated without
/// materializing beta. Index layout: entries 0..|V^R|-1 are type 1,
/// |V^R|..2|V^R|-1 are type 2.
struct SupportScanEntry {
  bool feasible = false;
  double value = 0.0;
  double remainder = 0.0;
};

/// Values of all 2|V^R| support candidates. The OpenMP kernel and the serial
/// reference produce bitwise-identical output; results are indexed, never
/// reduced in thread order.
std::vector<SupportScanEntry> scan_support_values(const ReducedGame& reduced,
                                                  const GameMatrices& m);
std::vector<SupportScanEntry> scan_support_values_serial(
    const ReducedGame& reduced, const GameMatrices& m);

enum class NeCase { kI, kII, kIII, kIV };
std::string_view to_string(NeCase c);

/// The complete Nash equilibrium set of the reduced game: the NE are exactly
/// { (alpha, beta) : alpha in hull(alpha_vertices), beta in hull(beta_vertices) }.
/// Supports are contiguous suffixes starting at k (0-based). The defender's
/// payoff is the same at every NE; the attacker's may vary across the beta
/// hull, reported as [attacker_lo, attacker_hi].
struct EquilibriumSet {
  NeCase case_tag = NeCase::kI;
  std::size_t k = 0;
  std::vector<std::vector<double>> beta_vertices;   // 1 or 2, length |V^R|+1
  std::vector<std::vector<double>> alpha_vertices;  // 1 or 2, length |V^R|
  double defender_value = 0.0;  // true game payoff
  double lp_value = 0.0;        // defender_value + shift
  double attacker_lo = 0.0;
  double attacker_hi = 0.0;
  double epsilon = 1.0;

  /// Deterministic representative attacker strategy (the last vertex: the
  /// maximal-alpha_k one when the set is a hull).
  const std::vector<double>& representative_alpha() const {
    return alpha_vertices.back();
  }
};

EquilibriumSet compute_all_ne(const ReducedGame& reduced, double epsilon = 1.0);

/// min over rows of (lambda beta) computed through cumulative sums, O(|V^R|).
double min_lambda_beta(const ReducedGame& reduced, double shift,
                       std::span<const double> beta);

}  // namespace advclass
