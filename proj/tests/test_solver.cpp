#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "advclass/errors.hpp"
#include "advclass/oracle.hpp"
#include "test_util.hpp"

using namespace advclass;
using testutil::simple_reduced;

TEST_CASE("build_matrices: definition substitution") {
  const ReducedGame g = simple_reduced({1.0, 2.0}, {0.4, 0.6}, 0.5, 3.0, 1.0);
  const GameMatrices m = build_matrices(g, 1.0);
  // lambda_tilde = [[2,-1,-1],[1,1,-2]], lambda = lambda_tilde + 3.
  const double lt[2][3] = {{2, -1, -1}, {1, 1, -2}};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m.lambda_tilde(i, j) == doctest::Approx(lt[i][j]).epsilon(1e-15));
      CHECK(m.lambda(i, j) == doctest::Approx(lt[i][j] + 3.0).epsilon(1e-15));
      CHECK(m.lambda(i, j) > 0.0);
    }
  }
  // mu: tail sums scaled by (1-p)/p*c_fa = 1.
  CHECK(m.mu[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.mu[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.mu[2] == 0.0);
}

TEST_CASE("build_matrices: single reward level") {
  const ReducedGame g = simple_reduced({1.0}, {1.0}, 0.5, 2.0, 1.0);
  const GameMatrices m = build_matrices(g, 1.0);
  CHECK(m.lambda(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(m.lambda(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("build_matrices: rejects bad inputs") {
  const ReducedGame g = simple_reduced({1.0, 2.0}, {0.4, 0.6}, 0.5, 3.0, 1.0);
  CHECK_THROWS_AS(build_matrices(g, 0.0), InputError);
  CHECK_THROWS_AS(build_matrices(g, -1.0), InputError);
  ReducedGame zero_noise = g;
  zero_noise.noise = {1.0, 0.0};
  CHECK_THROWS_AS(build_matrices(zero_noise, 1.0), ModelError);
}

TEST_CASE("tie_compare") {
  CHECK(tie_compare(2.0, 1.0, 1e-9) == std::weak_ordering::greater);
  CHECK(tie_compare(1.0, 1.0 + 1e-12, 1e-9) == std::weak_ordering::equivalent);
  const double eps = 0.5;
  CHECK(tie_compare(eps, eps * (1.0 + 1e-6), 1e-9) == std::weak_ordering::less);
  CHECK_THROWS_AS(tie_compare(1.0, 1.0, 0.0), InputError);
}

TEST_CASE("compute_beta: support candidate arithmetic") {
  const ReducedGame g =
      simple_reduced({1.0, 2.0, 4.0}, {0.3, 0.3, 0.4}, 0.5, 10.0, 1.0);
  const GameMatrices m = build_matrices(g, 1.0);
  const BetaCandidate c = compute_beta(g, m, 0, 2);
  REQUIRE(c.feasible);
  CHECK(c.beta[0] == 0.0);
  CHECK(c.beta[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(c.beta[2] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(c.beta[3] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("compute_beta: degenerate boundary consumes all mass") {
  const ReducedGame g = simple_reduced({1.0, 2.0}, {0.5, 0.5}, 0.5, 1.0, 1.0);
  const GameMatrices m = build_matrices(g, 1.0);
  const BetaCandidate c = compute_beta(g, m, 0, 1);
  REQUIRE(c.feasible);
  CHECK(c.remainder == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.beta == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("compute_beta: infeasible candidates") {
  const ReducedGame g =
      simple_reduced({1.0, 2.0, 10.0}, {0.3, 0.3, 0.4}, 0.5, 2.0, 1.0);
  const GameMatrices m = build_matrices(g, 1.0);
  // Interior sum from s=0 is (10-1)/2 = 4.5 > 1: negative remainder.
  CHECK_FALSE(compute_beta(g, m, 0, 1).feasible);
  CHECK_FALSE(compute_beta(g, m, 0, 2).feasible);
  // Type 1 upper bound at s >= 1: remainder 1 > (r_1-r_0)/c_d = 0.5.
  const ReducedGame g2 = simple_reduced({1.0, 2.0}, {0.5, 0.5}, 0.5, 2.0, 1.0);
  const GameMatrices m2 = build_matrices(g2, 1.0);
  const BetaCandidate c = compute_beta(g2, m2, 1, 1);
  CHECK(c.remainder == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(c.feasible);
  // No such bound at s=0: the always-classify column may take the mass.
  CHECK(compute_beta(g2, m2, 0, 1).feasible);
  CHECK_THROWS_AS(compute_beta(g2, m2, 2, 1), InputError);
  CHECK_THROWS_AS(compute_beta(g2, m2, 0, 3), InputError);
}

TEST_CASE("single reward level: always-classify beats never-classify") {
  const ReducedGame g = simple_reduced({1.0}, {1.0}, 0.5, 2.0, 1.0);
  const EquilibriumSet eq = compute_all_ne(g);
  CHECK(eq.case_tag == NeCase::kI);
  CHECK(eq.k == 0);
  // U^D_1 = c_d + eps - 1 = 2 (shifted); U^D_2 = eps = 1.
  CHECK(eq.lp_value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eq.defender_value == doctest::Approx(0.0).epsilon(1e-14));
  REQUIRE(eq.beta_vertices.size() == 1);
  CHECK(eq.beta_vertices[0] == std::vector<double>{1.0, 0.0});
  REQUIRE(eq.alpha_vertices.size() == 1);
  CHECK(eq.alpha_vertices[0] == std::vector<double>{1.0});
}

// Frozen expected output for the 2-level game rewards (1,2), c_d=1, p=0.5,
// c_fa=1, noise (0.5,0.5), derived by hand before the solver existed:
// the defender LP optimum is the degenerate vertex beta=(0,1,0) (both
// boundary candidates at s=0/s=1 collapse onto it), so the NE set is
// case (iii), k=0, alpha in hull{(0,1), (0.5,0.5)}, defender payoff -1.5,
// attacker payoff 1 at every NE.
TEST_CASE("two-reward game: frozen equilibrium set") {
  const ReducedGame g = simple_reduced({1.0, 2.0}, {0.5, 0.5}, 0.5, 1.0, 1.0);
  const EquilibriumSet eq = compute_all_ne(g);
  CHECK(eq.case_tag == NeCase::kIII);
  CHECK(eq.k == 0);
  REQUIRE(eq.beta_vertices.size() == 1);
  CHECK(eq.beta_vertices[0][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.beta_vertices[0][1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eq.beta_vertices[0][2] == doctest::Approx(0.0).epsilon(1e-14));
  REQUIRE(eq.alpha_vertices.size() == 2);
  CHECK(eq.alpha_vertices[0][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.alpha_vertices[0][1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eq.alpha_vertices[1][0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.alpha_vertices[1][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.defender_value == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(eq.attacker_lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eq.attacker_hi == doctest::Approx(1.0).epsilon(1e-12));
  // The solver value must match the independent LP within 1e-10.
  const DefenderLpSolution lp = solve_defender_lp(build_matrices(g, 1.0));
  CHECK(std::abs(lp.value - eq.lp_value) < 1e-10);
}

// Constructed knife-edge: rewards (1,2), c_d=2, p=1/3, c_fa=1 makes the
// type-1 and type-2 candidates at s=0 tie with a positive remainder, so the
// defender's NE set is the hull of two vertices (case iv, the U1 == U2
// branch). The unique alpha is (0.5, 0.5): the defender is indifferent
// everywhere and the attacker stays indifferent along the whole hull.
TEST_CASE("case iv via a type-1/type-2 tie") {
  const ReducedGame g = simple_reduced({1.0, 2.0}, {0.5, 0.5}, 1.0 / 3.0, 2.0, 1.0);
  const EquilibriumSet eq = compute_all_ne(g);
  CHECK(eq.case_tag == NeCase::kIV);
  CHECK(eq.k == 0);
  REQUIRE(eq.beta_vertices.size() == 2);
  CHECK(eq.beta_vertices[0][0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.beta_vertices[0][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.beta_vertices[0][2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.beta_vertices[1][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.beta_vertices[1][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.beta_vertices[1][2] == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(eq.alpha_vertices.size() == 1);
  CHECK(eq.alpha_vertices[0][0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.alpha_vertices[0][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(certify(g, eq, 1e-9).passed);
  // The attacker's payoff varies across the beta hull.
  CHECK(eq.attacker_hi - eq.attacker_lo == doctest::Approx(1.0).epsilon(1e-12));
}

// Constructed knife-edge: rewards (1,2,3), noise (0.5,0.25,0.25), p=0.2,
// c_d=4, c_fa=2 puts two adjacent type-2 candidates (s=0, s=1) at the same
// value, strictly above every type-1 candidate (case iv, the U1 < U2
// branch); k = 1 and alpha = (0, 0.5, 0.5) is pinned by both tight dual
// pairs.
TEST_CASE("case iv via two adjacent type-2 optima") {
  const ReducedGame g =
      simple_reduced({1.0, 2.0, 3.0}, {0.5, 0.25, 0.25}, 0.2, 4.0, 2.0);
  const EquilibriumSet eq = compute_all_ne(g);
  CHECK(eq.case_tag == NeCase::kIV);
  CHECK(eq.k == 1);
  REQUIRE(eq.beta_vertices.size() == 2);
  CHECK(eq.beta_vertices[0][1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(eq.beta_vertices[0][3] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.beta_vertices[1][1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.beta_vertices[1][3] == doctest::Approx(0.75).epsilon(1e-14));
  REQUIRE(eq.alpha_vertices.size() == 1);
  CHECK(eq.alpha_vertices[0][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eq.alpha_vertices[0][1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eq.alpha_vertices[0][2] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(certify(g, eq, 1e-9).passed);
  // Completeness: the dual optimal face has exactly this one vertex.
  const GameMatrices m = build_matrices(g, 1.0);
  const auto dual_face = enumerate_dual_face_vertices(m, eq.lp_value);
  CHECK(dual_face.size() == 1);
}

TEST_CASE("epsilon invariance of strategies and k") {
  for (int trial = 0; trial < 15; ++trial) {
    const ReducedGame g = random_reduced_game(9000 + trial);
    const EquilibriumSet a = compute_all_ne(g, 0.5);
    const EquilibriumSet b = compute_all_ne(g, 1.0);
    const EquilibriumSet c = compute_all_ne(g, 2.0);
    CHECK(a.k == b.k);
    CHECK(b.k == c.k);
    CHECK(a.case_tag == b.case_tag);
    CHECK(b.case_tag == c.case_tag);
    REQUIRE(a.beta_vertices.size() == b.beta_vertices.size());
    REQUIRE(b.beta_vertices.size() == c.beta_vertices.size());
    for (std::size_t v = 0; v < a.beta_vertices.size(); ++v) {
      for (std::size_t j = 0; j < a.beta_vertices[v].size(); ++j) {
        CHECK(std::abs(a.beta_vertices[v][j] - b.beta_vertices[v][j]) <= 1e-10);
        CHECK(std::abs(b.beta_vertices[v][j] - c.beta_vertices[v][j]) <= 1e-10);
      }
    }
    CHECK(std::abs(a.defender_value - b.defender_value) <= 1e-9);
    CHECK(std::abs(b.defender_value - c.defender_value) <= 1e-9);
  }
}

TEST_CASE("argmin rows of lambda beta and lambda_eq beta coincide") {
  const ReducedGame g = random_reduced_game(777);
  const GameMatrices m = build_matrices(g, 1.0);
  const std::size_t n = g.size();
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> beta = testutil::random_simplex(rng, n + 1);
    const double mu_beta =
        std::inner_product(beta.begin(), beta.end(), m.mu.begin(), 0.0);
    std::vector<double> lb(n, 0.0), leqb(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) lb[i] += m.lambda(i, j) * beta[j];
      leqb[i] = lb[i] - mu_beta;
    }
    const double min_lb = *std::min_element(lb.begin(), lb.end());
    const double min_leqb = *std::min_element(leqb.begin(), leqb.end());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK((lb[i] == min_lb) == (leqb[i] == min_leqb));
    }
  }
}

TEST_CASE("support shape, value uniqueness, maximin robustness") {
  for (int trial = 0; trial < 40; ++trial) {
    const ReducedGame g = random_reduced_game(5000 + trial);
    const GameMatrices m = build_matrices(g, 1.0);
    const EquilibriumSet eq = compute_all_ne(g);
    const std::size_t n = g.size();

    for (const auto& beta : eq.beta_vertices) {
      for (std::size_t j = 0; j < eq.k; ++j) CHECK(beta[j] == 0.0);
      for (std::size_t j = eq.k + 1; j < n; ++j) {
        CHECK(beta[j] ==
              doctest::Approx((g.rewards[j] - g.rewards[j - 1]) / g.c_d)
                  .epsilon(1e-12));
      }
      // Value identical across vertices (checked internally at 1e-10), and
      // beta is maximin: every pure attacker row pays at least the value.
      const double mu_beta =
          std::inner_product(beta.begin(), beta.end(), m.mu.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j <= n; ++j) row += m.lambda(i, j) * beta[j];
        CHECK(row - mu_beta >= eq.lp_value - 1e-9);
      }
    }
    for (const auto& alpha : eq.alpha_vertices) {
      for (std::size_t i = 0; i < eq.k; ++i) CHECK(alpha[i] == 0.0);
      for (const auto& beta : eq.beta_vertices) {
        CHECK(verify_ne(g, alpha, beta, 1e-8).passed);
      }
    }
  }
}

TEST_CASE("attacker payoff range covers sampled convex combinations") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int nontrivial = 0;
  for (int trial = 0; trial < 200 && nontrivial < 8; ++trial) {
    const ReducedGame g = random_reduced_game(40000 + trial);
    const EquilibriumSet eq = compute_all_ne(g);
    if (eq.beta_vertices.size() < 2) continue;
    ++nontrivial;
    for (int s = 0; s < 3; ++s) {
      const double t = unit(rng);
      std::vector<double> beta(g.size() + 1);
      for (std::size_t j = 0; j <= g.size(); ++j) {
        beta[j] = t * eq.beta_vertices[0][j] + (1 - t) * eq.beta_vertices[1][j];
      }
      const GameMatrices m = build_matrices(g, eq.epsilon);
      const double ua = m.shift - min_lambda_beta(g, m.shift, beta);
      CHECK(ua >= eq.attacker_lo - 1e-9);
      CHECK(ua <= eq.attacker_hi + 1e-9);
    }
  }
}

TEST_CASE("candidate scan: parallel == serial == explicit compute_beta") {
  for (int trial = 0; trial < 10; ++trial) {
    const ReducedGame g = random_reduced_game(600 + trial);
    const GameMatrices m = build_matrices(g, 1.0);
    const auto par = scan_support_values(g, m);
    const auto ser = scan_support_values_serial(g, m);
    REQUIRE(par.size() == ser.size());
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].feasible == ser[i].feasible);
      CHECK(par[i].value == ser[i].value);  // bitwise equal
      const BetaCandidate full = compute_beta(g, m, i % n, i < n ? 1 : 2);
      CHECK(par[i].feasible == full.feasible);
      if (full.feasible) {
        CHECK(par[i].value == full.value);  // same arithmetic, bitwise equal
        CHECK(par[i].remainder == full.remainder);
      }
    }
  }
  // The parallel path kicks in above the small-game cutoff; check a large
  // uniform game end to end.
  ReducedGame big;
  big.p = 0.3;
  big.c_d = 15.0;
  big.c_fa = 2.0;
  for (std::size_t i = 0; i < 600; ++i) {
    big.rewards.push_back(static_cast<double>(i));
    big.noise.push_back(1.0 / 600.0);
    big.sources.push_back({{std::to_string(i), big.noise.back()}});
  }
  const GameMatrices m = build_matrices(big, 1.0);
  const auto par = scan_support_values(big, m);
  const auto ser = scan_support_values_serial(big, m);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].feasible == ser[i].feasible);
    CHECK(par[i].value == ser[i].value);
  }
}
