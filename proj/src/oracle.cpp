#include "advclass/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "advclass/errors.hpp"

namespace advclass {

namespace {

int max_threads() {
#ifdef _OPENMP
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("ADVCLASS_NE_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) cap = std::min(cap, parsed);
  }
  return cap;
#else
  return 1;
#endif
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

VerificationReport verify_ne(const ReducedGame& reduced,
                             std::span<const double> alpha,
                             std::span<const double> beta, double tol) {
  const std::size_t n = reduced.size();
  if (alpha.size() != n || beta.size() != n + 1) {
    throw InputError("verify_ne: strategies misaligned with the reduced game");
  }
  check_probability_vector(alpha, "verify_ne: alpha");
  check_probability_vector(beta, "verify_ne: beta");

  const std::vector<double> pd = profile_from_thresholds(reduced, beta);
  double ua_mixed = 0.0;
  double ua_best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double ua = reduced.rewards[i] - reduced.c_d * pd[i];
    ua_mixed += alpha[i] * ua;
    ua_best = std::max(ua_best, ua);
  }

  // U^D(alpha, c_j) = c_d sum_{i>=j} alpha_i - sum_i r_i alpha_i - mu_j.
  const double factor = reduced.false_alarm_factor();
  const double mean_reward =
      std::inner_product(alpha.begin(), alpha.end(), reduced.rewards.begin(), 0.0);
  std::vector<double> ud_col(n + 1, 0.0);
  double tail_alpha = 0.0;
  double tail_noise = 0.0;
  ud_col[n] = -mean_reward;  // never classify
  for (std::size_t j = n; j-- > 0;) {
    tail_alpha += alpha[j];
    tail_noise += reduced.noise[j];
    ud_col[j] = reduced.c_d * tail_alpha - mean_reward - factor * tail_noise;
  }
  double ud_mixed = 0.0;
  double ud_best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    ud_mixed += beta[j] * ud_col[j];
    ud_best = std::max(ud_best, ud_col[j]);
  }

  VerificationReport rep;
  rep.tol = tol;
  rep.attacker_residual = ua_best - ua_mixed;
  rep.defender_residual = ud_best - ud_mixed;
  rep.passed =
      rep.attacker_residual <= tol && rep.defender_residual <= tol;
  return rep;
}

VerificationReport verify_ne(const GameSpec& spec, const MixedStrategy& alpha,
                             const ClassifierMixture& beta, double tol) {
  const std::vector<double> pd = detection_profile(spec, beta);
  const std::vector<double> a = alpha_by_index(spec, alpha);

  double ua_mixed = 0.0;
  double ua_best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double ua = spec.reward[i] - spec.c_d * pd[i];
    ua_mixed += a[i] * ua;
    ua_best = std::max(ua_best, ua);
  }

  // Defender deviations over threshold classifiers on the attack reward.
  const double factor = spec.false_alarm_factor();
  const double mean_reward = dot(a, spec.reward);
  std::vector<double> thresholds = spec.reward;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  double ud_best = -mean_reward;  // never classify
  for (double t : thresholds) {
    const ThresholdClassifier tc{t};
    double detect_alpha = 0.0;
    double detect_noise = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (tc.detects(spec.reward[i])) {
        detect_alpha += a[i];
        detect_noise += spec.noise[i];
      }
    }
    ud_best = std::max(
        ud_best, spec.c_d * detect_alpha - mean_reward - factor * detect_noise);
  }
  const PayoffPair mixed = mixed_payoffs_via_profile(spec, alpha, beta);

  VerificationReport rep;
  rep.tol = tol;
  rep.attacker_residual = ua_best - ua_mixed;
  rep.defender_residual = ud_best - mixed.defender;
  rep.passed = rep.attacker_residual <= tol && rep.defender_residual <= tol;
  return rep;
}

VerificationReport certify(const ReducedGame& reduced, const EquilibriumSet& eq,
                           double tol) {
  VerificationReport worst;
  worst.tol = tol;
  worst.passed = true;
  for (const auto& alpha : eq.alpha_vertices) {
    for (const auto& beta : eq.beta_vertices) {
      const VerificationReport r = verify_ne(reduced, alpha, beta, tol);
      worst.attacker_residual =
          std::max(worst.attacker_residual, r.attacker_residual);
      worst.defender_residual =
          std::max(worst.defender_residual, r.defender_residual);
      worst.passed = worst.passed && r.passed;
    }
  }
  const GameMatrices m = build_matrices(reduced, eq.epsilon);
  const DefenderLpSolution lp = solve_defender_lp(m);
  worst.oracle_value_gap = std::abs(lp.value - eq.lp_value);
  worst.passed = worst.passed &&
                 worst.oracle_value_gap <=
                     1e-7 * std::max(1.0, std::abs(lp.value));
  return worst;
}

DefenderLpSolution solve_defender_lp(const Matrix& lambda,
                                     std::span<const double> mu) {
  const std::size_t rows = lambda.rows;
  const std::size_t cols = lambda.cols;
  if (mu.size() != cols) throw InputError("mu misaligned with lambda");

  // Variables: beta (cols), z+ and z-.
  LinearProgram lp(cols + 2);
  for (std::size_t j = 0; j < cols; ++j) lp.objective[j] = -mu[j];
  lp.objective[cols] = 1.0;
  lp.objective[cols + 1] = -1.0;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> row(cols + 2, 0.0);
    for (std::size_t j = 0; j < cols; ++j) row[j] = lambda(i, j);
    row[cols] = -1.0;
    row[cols + 1] = 1.0;
    lp.add_constraint(std::move(row), 'G', 0.0);
  }
  std::vector<double> simplex_row(cols + 2, 0.0);
  std::fill(simplex_row.begin(), simplex_row.begin() + cols, 1.0);
  lp.add_constraint(std::move(simplex_row), 'E', 1.0);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InternalError("defender LP is not optimal; lambda must be positive");
  }
  DefenderLpSolution out;
  out.beta.assign(sol.x.begin(), sol.x.begin() + cols);
  out.z = sol.x[cols] - sol.x[cols + 1];
  out.value = sol.objective;
  return out;
}

DefenderLpSolution solve_defender_lp(const GameMatrices& m) {
  return solve_defender_lp(m.lambda, m.mu);
}

AttackerDualSolution solve_attacker_dual(const Matrix& lambda,
                                         std::span<const double> mu) {
  const std::size_t rows = lambda.rows;
  const std::size_t cols = lambda.cols;
  if (mu.size() != cols) throw InputError("mu misaligned with lambda");

  // Variables: alpha (rows), y+ and y-; minimize y == maximize -y.
  LinearProgram lp(rows + 2);
  lp.objective[rows] = -1.0;
  lp.objective[rows + 1] = 1.0;
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> row(rows + 2, 0.0);
    for (std::size_t i = 0; i < rows; ++i) row[i] = lambda(i, j);
    row[rows] = -1.0;
    row[rows + 1] = 1.0;
    lp.add_constraint(std::move(row), 'L', mu[j]);
  }
  std::vector<double> simplex_row(rows + 2, 0.0);
  std::fill(simplex_row.begin(), simplex_row.begin() + rows, 1.0);
  lp.add_constraint(std::move(simplex_row), 'E', 1.0);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InternalError("attacker dual LP is not optimal");
  }
  AttackerDualSolution out;
  out.alpha.assign(sol.x.begin(), sol.x.begin() + rows);
  out.value = sol.x[rows] - sol.x[rows + 1];
  return out;
}

AttackerDualSolution solve_attacker_dual(const GameMatrices& m) {
  return solve_attacker_dual(m.lambda, m.mu);
}

double full_game_value(const GameSpec& spec) {
  const std::size_t nv = spec.size();
  if (nv > 12) {
    throw SizeError("full_game_value materializes 2^|V| classifiers; |V| <= 12");
  }
  const std::size_t nc = std::size_t{1} << nv;
  const double factor = spec.false_alarm_factor();

  // Defender maximin LP over all 2^|V| classifiers: maximize t subject to
  // sum_c beta_c U^D(v_i, c) >= t for every vector.
  LinearProgram lp(nc + 2);
  lp.objective[nc] = 1.0;
  lp.objective[nc + 1] = -1.0;
  std::vector<double> fa_mass(nc, 0.0);
  for (std::size_t c = 1; c < nc; ++c) {
    const std::size_t low = c & (c - 1);
    const std::size_t bit = c ^ low;
    std::size_t idx = 0;
    for (std::size_t b = bit; b > 1; b >>= 1) ++idx;
    fa_mass[c] = fa_mass[low] + spec.noise[idx];
  }
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<double> row(nc + 2, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      const bool detected = (c >> i) & 1u;
      const double ua = spec.reward[i] - (detected ? spec.c_d : 0.0);
      row[c] = -ua - factor * fa_mass[c];
    }
    row[nc] = -1.0;
    row[nc + 1] = 1.0;
    lp.add_constraint(std::move(row), 'G', 0.0);
  }
  std::vector<double> simplex_row(nc + 2, 0.0);
  std::fill(simplex_row.begin(), simplex_row.begin() + nc, 1.0);
  lp.add_constraint(std::move(simplex_row), 'E', 1.0);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InternalError("full-game LP is not optimal");
  }
  return sol.objective;
}

namespace {

// Solve the d x d system picked by a tight-constraint subset. Returns false
// when singular.
bool solve_square(Matrix a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t d = b.size();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) < 1e-11) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < d; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < d; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  x.assign(d, 0.0);
  for (std::size_t r = d; r-- > 0;) {
    double acc = b[r];
    for (std::size_t j = r + 1; j < d; ++j) acc -= a(r, j) * x[j];
    x[r] = acc / a(r, r);
  }
  return true;
}

// Next combination in lexicographic order; false when exhausted.
bool next_combination(std::vector<std::size_t>& c, std::size_t total) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < total) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_combinations(std::size_t total,
                                                       std::size_t choose) {
  std::vector<std::vector<std::size_t>> out;
  if (choose > total) return out;
  std::vector<std::size_t> c(choose);
  std::iota(c.begin(), c.end(), 0);
  do {
    out.push_back(c);
  } while (next_combination(c, total));
  return out;
}

struct VertexScratch {
  bool ok = false;
  std::vector<double> x;
};

// Candidate vertex from one tight subset of {inequality rows} u {positivity}.
// Constraint indices: 0..n-1 inequality rows, n..n+d-1 positivity of x_j.
VertexScratch candidate_vertex(const GameMatrices& m,
                               const std::vector<std::size_t>& subset) {
  const std::size_t n = m.levels();
  const std::size_t d = n + 1;
  Matrix a(d, d);
  std::vector<double> b(d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t c = subset[r];
    if (c < n) {
      for (std::size_t j = 0; j < d; ++j) a(r, j) = m.lambda(c, j);
      b[r] = 1.0;
    } else {
      a(r, c - n) = 1.0;
      b[r] = 0.0;
    }
  }
  VertexScratch out;
  std::vector<double> x;
  if (!solve_square(std::move(a), std::move(b), x)) return out;
  // Feasibility: lambda x >= 1 and x >= 0, with a scaled slack.
  for (double v : x) {
    if (v < -1e-9) return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += m.lambda(i, j) * x[j];
    if (acc < 1.0 - 1e-9) return out;
  }
  out.ok = true;
  out.x = std::move(x);
  return out;
}

std::vector<PolyhedronVertex> collect_vertices(
    const GameMatrices& m, const std::vector<VertexScratch>& found) {
  const std::size_t n = m.levels();
  std::vector<PolyhedronVertex> out;
  for (const auto& cand : found) {
    if (!cand.ok) continue;
    bool dup = false;
    for (const auto& seen : out) {
      double diff = 0.0;
      for (std::size_t j = 0; j <= n; ++j) {
        diff = std::max(diff, std::abs(seen.x[j] - cand.x[j]));
      }
      if (diff <= 1e-8 * (1.0 + std::abs(seen.x[0]))) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    PolyhedronVertex v;
    v.x = cand.x;
    double norm = 0.0;
    for (double xv : v.x) norm += std::max(xv, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= n; ++j) acc += m.lambda(i, j) * v.x[j];
      if (std::abs(acc - 1.0) <= 1e-8) v.tight_rows.push_back(i);
    }
    v.value = (1.0 - dot(v.x, m.mu)) / norm;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<PolyhedronVertex> enumerate_polyhedron_vertices_serial(
    const GameMatrices& m) {
  const std::size_t n = m.levels();
  if (n > 16) throw SizeError("vertex enumeration capped at |V^R| = 16");
  const auto subsets = all_combinations(2 * n + 1, n + 1);
  std::vector<VertexScratch> found(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    found[i] = candidate_vertex(m, subsets[i]);
  }
  return collect_vertices(m, found);
}

std::vector<PolyhedronVertex> enumerate_polyhedron_vertices(
    const GameMatrices& m) {
  const std::size_t n = m.levels();
  if (n > 16) throw SizeError("vertex enumeration capped at |V^R| = 16");
  const auto subsets = all_combinations(2 * n + 1, n + 1);
  std::vector<VertexScratch> found(subsets.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
  for (long long i = 0; i < static_cast<long long>(subsets.size()); ++i) {
    found[static_cast<std::size_t>(i)] =
        candidate_vertex(m, subsets[static_cast<std::size_t>(i)]);
  }
  return collect_vertices(m, found);
}

std::vector<PolyhedronVertex> optimal_polyhedron_vertices(const GameMatrices& m,
                                                          double rel_tol) {
  std::vector<PolyhedronVertex> all = enumerate_polyhedron_vertices(m);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : all) best = std::max(best, v.value);
  std::vector<PolyhedronVertex> out;
  for (auto& v : all) {
    if (tie_compare(v.value, best, rel_tol) == std::weak_ordering::equivalent) {
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<std::vector<double>> enumerate_dual_face_vertices(
    const GameMatrices& m, double y_star, double tol) {
  const std::size_t n = m.levels();
  if (n > 16) throw SizeError("dual face enumeration capped at |V^R| = 16");
  // Polytope in alpha-space: sum alpha = 1, alpha >= 0,
  // (alpha'lambda)_j <= mu_j + y_star. Constraint ids: 0..n (columns),
  // n+1..2n (positivity). The simplex equality is always tight; choose n-1
  // more constraints to pin a vertex.
  std::vector<std::vector<double>> out;
  if (n == 1) {
    out.push_back({1.0});
    return out;
  }
  const auto subsets = all_combinations(2 * n + 1, n - 1);
  for (const auto& subset : subsets) {
    Matrix a(n, n);
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) a(0, j) = 1.0;
    b[0] = 1.0;
    for (std::size_t r = 0; r < subset.size(); ++r) {
      const std::size_t c = subset[r];
      if (c <= n) {
        for (std::size_t i = 0; i < n; ++i) a(r + 1, i) = m.lambda(i, c);
        b[r + 1] = m.mu[c] + y_star;
      } else {
        a(r + 1, c - n - 1) = 1.0;
        b[r + 1] = 0.0;
      }
    }
    std::vector<double> alpha;
    if (!solve_square(std::move(a), std::move(b), alpha)) continue;
    bool feasible = true;
    for (double v : alpha) {
      if (v < -tol) feasible = false;
    }
    for (std::size_t j = 0; feasible && j <= n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += alpha[i] * m.lambda(i, j);
      if (acc > m.mu[j] + y_star + tol * std::max(1.0, std::abs(m.mu[j] + y_star))) {
        feasible = false;
      }
    }
    if (!feasible) continue;
    for (double& v : alpha) v = std::max(v, 0.0);
    bool dup = false;
    for (const auto& seen : out) {
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(seen[i] - alpha[i]));
      }
      if (diff <= 1e-7) dup = true;
    }
    if (!dup) out.push_back(std::move(alpha));
  }
  return out;
}

ReducedGame random_reduced_game(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, 8);
  std::uniform_real_distribution<double> reward_dist(0.0, 10.0);
  std::uniform_real_distribution<double> noise_dist(0.05, 1.0);
  std::uniform_real_distribution<double> cost_dist(0.1, 10.0);
  std::uniform_real_distribution<double> p_dist(0.05, 0.95);

  const std::size_t n = size_dist(rng);
  std::vector<double> rewards;
  while (rewards.size() < n) {
    const double r = reward_dist(rng);
    bool close = false;
    for (double seen : rewards) {
      if (std::abs(seen - r) < 1e-6 * std::max(1.0, std::abs(seen))) close = true;
    }
    if (!close) rewards.push_back(r);
  }
  std::sort(rewards.begin(), rewards.end());
  std::vector<double> noise(n);
  double mass = 0.0;
  for (double& w : noise) {
    w = noise_dist(rng);
    mass += w;
  }
  for (double& w : noise) w /= mass;

  ReducedGame g;
  g.rewards = std::move(rewards);
  g.noise = std::move(noise);
  g.c_d = cost_dist(rng);
  g.c_fa = cost_dist(rng);
  g.p = p_dist(rng);
  for (std::size_t i = 0; i < n; ++i) {
    g.sources.push_back({{std::to_string(i), g.noise[i]}});
  }
  return g;
}

GameSpec random_full_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, 4);
  std::uniform_real_distribution<double> reward_dist(0.0, 10.0);
  std::uniform_real_distribution<double> noise_dist(0.05, 1.0);
  std::uniform_real_distribution<double> cost_dist(0.1, 10.0);
  std::uniform_real_distribution<double> p_dist(0.05, 0.95);

  const std::size_t n = size_dist(rng);
  std::vector<AttackVector> vectors;
  std::vector<double> reward(n);
  std::vector<double> noise(n);
  for (std::size_t i = 0; i < n; ++i) {
    vectors.push_back({"v" + std::to_string(i), {static_cast<int>(i)}});
    reward[i] = reward_dist(rng);
    noise[i] = noise_dist(rng);
  }
  if (seed % 2 == 0 && n >= 2) reward[n - 1] = reward[0];  // forced duplicate
  const double mass = std::accumulate(noise.begin(), noise.end(), 0.0);
  for (double& w : noise) w /= mass;
  const double c_d = cost_dist(rng);
  const double c_fa = cost_dist(rng);
  const double p = p_dist(rng);
  return make_game_spec(std::move(vectors), std::move(reward), std::move(noise),
                        p, c_d, c_fa);
}

}  // namespace advclass
