#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "advclass/game.hpp"
#include "advclass/solver.hpp"

namespace advclass {

/// Best-response residuals of a strategy pair. A certified equilibrium has
/// both residuals <= tol; residuals are >= 0 up to floating-point noise.
struct VerificationReport {
  double attacker_residual = 0.0;
  double defender_residual = 0.0;
  double oracle_value_gap = 0.0;  // |claimed value - LP value|, 0 if not checked
  double tol = 1e-9;
  bool passed = false;
};

/// Residuals of (alpha, beta) in the reduced game: the attacker deviates to
/// any reward level, the defender to any threshold column.
VerificationReport verify_ne(const ReducedGame& reduced,
                             std::span<const double> alpha,
                             std::span<const double> beta, double tol = 1e-9);

/// Residuals of (alpha, beta) in the full game: the attacker deviates to any
/// vector, the defender to any threshold classifier on the attack reward.
VerificationReport verify_ne(const GameSpec& spec, const MixedStrategy& alpha,
                             const ClassifierMixture& beta, double tol = 1e-9);

/// Verifies every vertex pair of an equilibrium set (plus the value against
/// the LP oracle) and returns the worst report.
VerificationReport certify(const ReducedGame& reduced, const EquilibriumSet& eq,
                           double tol = 1e-9);

/// The defender's maximin LP, solved by the self-contained simplex:
///   maximize -mu'beta + z  s.t.  z 1 <= lambda beta, 1'beta = 1, beta >= 0.
/// Works for any positive cost matrix, not only build_matrices output.
struct DefenderLpSolution {
  std::vector<double> beta;
  double value = 0.0;  // -mu'beta + z, same offset convention as compute_beta
  double z = 0.0;      // min[lambda beta] at the optimum
};
DefenderLpSolution solve_defender_lp(const Matrix& lambda,
                                     std::span<const double> mu);
DefenderLpSolution solve_defender_lp(const GameMatrices& m);

/// The dual LP: minimize y s.t. alpha'lambda - y 1' <= mu', 1'alpha = 1,
/// alpha >= 0. Strong duality: its value equals the primal's.
struct AttackerDualSolution {
  std::vector<double> alpha;
  double value = 0.0;
};
AttackerDualSolution solve_attacker_dual(const Matrix& lambda,
                                         std::span<const double> mu);
AttackerDualSolution solve_attacker_dual(const GameMatrices& m);

/// Value of the zero-sum equivalent game over the FULL classifier set 2^V
/// (defender maximin, true payoff units). |V| <= 12.
double full_game_value(const GameSpec& spec);

/// An extreme point of the defender polyhedron  lambda x >= 1, x >= 0.
struct PolyhedronVertex {
  std::vector<double> x;
  std::vector<std::size_t> tight_rows;  // inequality constraints tight at x
  double value = 0.0;                   // (1 - mu'x)/||x||_1, the shifted payoff
};

/// All extreme points (|V^R| <= 16; cost grows combinatorially, tests stay
/// at <= 8). Deterministic order. The OpenMP scan and the serial reference
/// agree exactly.
std::vector<PolyhedronVertex> enumerate_polyhedron_vertices(const GameMatrices& m);
std::vector<PolyhedronVertex> enumerate_polyhedron_vertices_serial(
    const GameMatrices& m);

/// The subset of extreme points attaining the optimal value within rel_tol.
std::vector<PolyhedronVertex> optimal_polyhedron_vertices(const GameMatrices& m,
                                                          double rel_tol = 1e-9);

/// All extreme attacker strategies of the dual optimal face at value y_star:
/// the complete set of equilibrium alpha vertices, found independently of
/// the closed-form attacker construction.
std::vector<std::vector<double>> enumerate_dual_face_vertices(
    const GameMatrices& m, double y_star, double tol = 1e-8);

/// Seeded random instances for cross-validation, per the acceptance recipe:
/// 2..8 levels, rewards uniform in (0,10) sorted, strictly positive noise,
/// c_d and c_fa in (0.1,10), p in (0.05,0.95).
ReducedGame random_reduced_game(std::uint64_t seed);

/// Seeded random full spec with |V| in [2,4]; every other seed forces a
/// duplicated reward so the collapse path gets exercised.
GameSpec random_full_spec(std::uint64_t seed);

}  // namespace advclass
