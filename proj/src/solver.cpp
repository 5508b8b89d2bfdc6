#include "advclass/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "advclass/errors.hpp"

namespace advclass {

namespace {

constexpr double kFeasSlack = 1e-12;
constexpr double kValueTieTol = 1e-9;

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

void require_solvable(const ReducedGame& reduced) {
  if (reduced.size() == 0) throw InputError("reduced game has no reward levels");
  if (!(reduced.c_d > 0.0)) {
    throw ModelError("closed-form solver requires c_d > 0");
  }
  if (!(reduced.p > 0.0) || !(reduced.p < 1.0)) {
    throw ModelError("attacker prior p must lie strictly inside (0,1)");
  }
  if (!(reduced.c_fa > 0.0)) {
    throw ModelError(
        "c_fa must be positive: with c_fa = 0 the false-alarm penalty vector mu "
        "is identically zero and not strictly decreasing");
  }
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    if (!(reduced.noise[i] > 0.0)) {
      throw ModelError(
          "strict monotonicity of mu requires P^R_N > 0 at every reward level; "
          "level r=" + reward_label(reduced.rewards[i]) +
          " has zero noise mass (use the brute-force oracle full_game_value for such specs)");
    }
  }
  for (std::size_t i = 0; i + 1 < reduced.size(); ++i) {
    if (!(reduced.rewards[i] < reduced.rewards[i + 1])) {
      throw InputError("reduced rewards must be strictly increasing");
    }
  }
}

}  // namespace

GameMatrices build_matrices(const ReducedGame& reduced, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  require_solvable(reduced);

  const std::size_t n = reduced.size();
  GameMatrices m;
  m.epsilon = epsilon;
  m.shift = reduced.rewards.back() + epsilon;
  m.lambda_tilde = Matrix(n, n + 1);
  m.lambda = Matrix(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      const double detect = (j < n && i >= j) ? reduced.c_d : 0.0;
      m.lambda_tilde(i, j) = detect - reduced.rewards[i];
      m.lambda(i, j) = m.lambda_tilde(i, j) + m.shift;
    }
  }
  m.mu.assign(n + 1, 0.0);
  const double factor = reduced.false_alarm_factor();
  double tail = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    tail += reduced.noise[i];
    m.mu[i] = factor * tail;
  }
  return m;
}

std::weak_ordering tie_compare(double a, double b, double tol) {
  if (!(tol > 0.0)) throw InputError("tie_compare tolerance must be positive");
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= tol * scale) return std::weak_ordering::equivalent;
  return a < b ? std::weak_ordering::less : std::weak_ordering::greater;
}

double min_lambda_beta(const ReducedGame& reduced, double shift,
                       std::span<const double> beta) {
  const std::size_t n = reduced.size();
  double cum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    cum += beta[i];
    mn = std::min(mn, reduced.c_d * cum + shift - reduced.rewards[i]);
  }
  return mn;
}

BetaCandidate compute_beta(const ReducedGame& reduced, const GameMatrices& m,
                           std::size_t s, int type) {
  const std::size_t n = reduced.size();
  if (s >= n) throw InputError("compute_beta: support index out of range");
  if (type != 1 && type != 2) throw InputError("compute_beta: type must be 1 or 2");

  BetaCandidate cand;
  cand.s = s;
  cand.type = type;
  cand.beta.assign(n + 1, 0.0);
  double interior = 0.0;
  for (std::size_t i = s + 1; i < n; ++i) {
    cand.beta[i] = (reduced.rewards[i] - reduced.rewards[i - 1]) / reduced.c_d;
    interior += cand.beta[i];
  }
  cand.remainder = 1.0 - interior;
  if (cand.remainder < -kFeasSlack) return cand;  // infeasible
  if (type == 1 && s >= 1) {
    // Inequality constraint s-1 of the polyhedron caps the boundary weight.
    // There is no such constraint for s = 0; the always-classify column may
    // carry any remaining mass there.
    const double bound =
        (reduced.rewards[s] - reduced.rewards[s - 1]) / reduced.c_d;
    if (cand.remainder > bound + kFeasSlack) return cand;
  }
  const double rem = std::max(cand.remainder, 0.0);
  if (type == 1) {
    cand.beta[s] = rem;
  } else {
    cand.beta[n] = rem;
  }
  cand.feasible = true;
  cand.value = min_lambda_beta(reduced, m.shift, cand.beta) -
               std::inner_product(cand.beta.begin(), cand.beta.end(),
                                  m.mu.begin(), 0.0);
  return cand;
}

namespace {

// Same arithmetic as compute_beta, without the beta vector: the cumulative
// weight and the row minimum are tracked in place.
SupportScanEntry evaluate_candidate(const ReducedGame& reduced,
                                    const GameMatrices& m, std::size_t s,
                                    int type) {
  const std::size_t n = reduced.size();
  SupportScanEntry entry;
  double interior = 0.0;
  for (std::size_t i = s + 1; i < n; ++i) {
    interior += (reduced.rewards[i] - reduced.rewards[i - 1]) / reduced.c_d;
  }
  entry.remainder = 1.0 - interior;
  if (entry.remainder < -kFeasSlack) return entry;
  if (type == 1 && s >= 1) {
    const double bound =
        (reduced.rewards[s] - reduced.rewards[s - 1]) / reduced.c_d;
    if (entry.remainder > bound + kFeasSlack) return entry;
  }
  const double rem = std::max(entry.remainder, 0.0);
  double cum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  double mu_dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s && type == 1) {
      cum += rem;
      mu_dot += m.mu[i] * rem;
    }
    if (i > s) {
      const double g = (reduced.rewards[i] - reduced.rewards[i - 1]) / reduced.c_d;
      cum += g;
      mu_dot += m.mu[i] * g;
    }
    mn = std::min(mn, reduced.c_d * cum + m.shift - reduced.rewards[i]);
  }
  // The never-classify column carries mu = 0, so a type-2 remainder adds
  // nothing to the dot product.
  entry.feasible = true;
  entry.value = mn - mu_dot;
  return entry;
}

}  // namespace

std::vector<SupportScanEntry> scan_support_values_serial(
    const ReducedGame& reduced, const GameMatrices& m) {
  const std::size_t n = reduced.size();
  std::vector<SupportScanEntry> out(2 * n);
  for (std::size_t idx = 0; idx < 2 * n; ++idx) {
    out[idx] = evaluate_candidate(reduced, m, idx % n, idx < n ? 1 : 2);
  }
  return out;
}

std::vector<SupportScanEntry> scan_support_values(const ReducedGame& reduced,
                                                  const GameMatrices& m) {
  const std::size_t n = reduced.size();
  if (n < 256) return scan_support_values_serial(reduced, m);
  std::vector<SupportScanEntry> out(2 * n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
  for (long long idx = 0; idx < static_cast<long long>(2 * n); ++idx) {
    const std::size_t u = static_cast<std::size_t>(idx);
    out[u] = evaluate_candidate(reduced, m, u % n, u < n ? 1 : 2);
  }
  return out;
}

std::string_view to_string(NeCase c) {
  switch (c) {
    case NeCase::kI: return "i";
    case NeCase::kII: return "ii";
    case NeCase::kIII: return "iii";
    case NeCase::kIV: return "iv";
  }
  return "?";
}

namespace {

enum class BoundaryPattern { kBetaKPositive, kNeverPositive, kBothZero };

std::vector<double> clamp_alpha(std::vector<double> a) {
  for (double& x : a) {
    if (x < 0.0) {
      if (x < -1e-9) throw InternalError("negative attacker weight computed");
      x = 0.0;
    }
  }
  return a;
}

// Attacker-side weights for a given support start. The second
// case-(iii) vertex caps alpha_k by
// S - factor*P^R_N(r_last): the never-classify dual constraint forces
// alpha_last >= factor*P^R_N(r_last) at every dual optimum.
std::vector<std::vector<double>> compute_alpha(const ReducedGame& reduced,
                                               std::size_t k,
                                               BoundaryPattern pattern) {
  const std::size_t n = reduced.size();
  const double f = reduced.false_alarm_factor() / reduced.c_d;
  std::vector<double> base(n, 0.0);
  for (std::size_t i = k + 1; i + 1 < n; ++i) base[i] = f * reduced.noise[i];

  auto fill_last_from = [&](std::vector<double>& a, std::size_t from) {
    double sum = 0.0;
    for (std::size_t i = from; i + 1 < n; ++i) sum += a[i];
    a[n - 1] = 1.0 - sum;
  };

  std::vector<std::vector<double>> vertices;
  switch (pattern) {
    case BoundaryPattern::kBetaKPositive: {
      std::vector<double> a = base;
      a[k] = f * reduced.noise[k];
      fill_last_from(a, k);
      vertices.push_back(std::move(a));
      break;
    }
    case BoundaryPattern::kNeverPositive: {
      std::vector<double> a = base;
      a[n - 1] = f * reduced.noise[n - 1];
      double sum = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) sum += a[i];
      a[k] = 1.0 - sum;
      vertices.push_back(std::move(a));
      break;
    }
    case BoundaryPattern::kBothZero: {
      double interior = 0.0;
      for (std::size_t i = k + 1; i + 1 < n; ++i) interior += base[i];
      const double slack = 1.0 - interior;
      std::vector<double> lo = base;
      lo[k] = 0.0;
      fill_last_from(lo, k);
      std::vector<double> hi = base;
      hi[k] = std::min(f * reduced.noise[k], slack - f * reduced.noise[n - 1]);
      fill_last_from(hi, k);
      vertices.push_back(std::move(lo));
      if (std::abs(vertices.front()[k] - hi[k]) > 1e-14) {
        vertices.push_back(std::move(hi));
      }
      break;
    }
  }
  for (auto& v : vertices) v = clamp_alpha(std::move(v));
  return vertices;
}

}  // namespace

EquilibriumSet compute_all_ne(const ReducedGame& reduced, double epsilon) {
  const GameMatrices m = build_matrices(reduced, epsilon);
  const std::size_t n = reduced.size();
  const std::vector<SupportScanEntry> cands = scan_support_values(reduced, m);

  // Per-type maxima; smallest s wins among exact ties of the same type.
  double u1 = -std::numeric_limits<double>::infinity();
  std::size_t s1 = n;
  double u2 = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    if (cands[s].feasible && cands[s].value > u1) {
      u1 = cands[s].value;
      s1 = s;
    }
    if (cands[n + s].feasible) u2 = std::max(u2, cands[n + s].value);
  }
  std::vector<std::size_t> s2_ties;
  for (std::size_t s = 0; s < n; ++s) {
    if (cands[n + s].feasible &&
        tie_compare(cands[n + s].value, u2, kValueTieTol) ==
            std::weak_ordering::equivalent) {
      s2_ties.push_back(s);
    }
  }
  if (s2_ties.empty()) throw InternalError("no feasible type-2 candidate");
  const std::size_t s2a = s2_ties.front();
  const bool s2_twofold = s2_ties.size() >= 2 && s2_ties[1] == s2a + 1;

  EquilibriumSet eq;
  eq.epsilon = epsilon;
  const auto cmp = (s1 == n) ? std::weak_ordering::less
                             : tie_compare(u1, u2, kValueTieTol);

  if (cmp == std::weak_ordering::greater) {
    eq.case_tag = NeCase::kI;
    eq.k = s1;
    eq.beta_vertices.push_back(compute_beta(reduced, m, s1, 1).beta);
    eq.alpha_vertices =
        compute_alpha(reduced, eq.k, BoundaryPattern::kBetaKPositive);
  } else if (cmp == std::weak_ordering::less) {
    if (!s2_twofold) {
      eq.case_tag = NeCase::kII;
      eq.k = s2a;
      eq.beta_vertices.push_back(compute_beta(reduced, m, s2a, 2).beta);
      eq.alpha_vertices =
          compute_alpha(reduced, eq.k, BoundaryPattern::kNeverPositive);
    } else {
      eq.case_tag = NeCase::kIV;
      eq.k = s2a + 1;
      eq.beta_vertices.push_back(compute_beta(reduced, m, s2a, 2).beta);
      eq.beta_vertices.push_back(compute_beta(reduced, m, s2a + 1, 2).beta);
      eq.alpha_vertices =
          compute_alpha(reduced, eq.k, BoundaryPattern::kBetaKPositive);
    }
  } else {
    if (!s2_twofold) {
      // The optimal type-1 and type-2 vertices share s here (adjacent
      // extreme points); both candidates are rebuilt at s1.
      const std::size_t s = (s1 == n) ? s2a : s1;
      const BetaCandidate b1 = compute_beta(reduced, m, s, 1);
      const BetaCandidate b2 = compute_beta(reduced, m, s, 2);
      if (b1.feasible && b1.remainder > kFeasSlack) {
        eq.case_tag = NeCase::kIV;
        eq.k = s;
        eq.beta_vertices.push_back(b1.beta);
        eq.beta_vertices.push_back(b2.beta);
        eq.alpha_vertices =
            compute_alpha(reduced, eq.k, BoundaryPattern::kBetaKPositive);
      } else {
        eq.case_tag = NeCase::kIII;
        eq.k = s;
        eq.beta_vertices.push_back(b2.beta);
        eq.alpha_vertices =
            compute_alpha(reduced, eq.k, BoundaryPattern::kBothZero);
      }
    } else {
      // The type-1 optimum coincides with the degenerate type-2a solution.
      eq.case_tag = NeCase::kIV;
      eq.k = s2a + 1;
      eq.beta_vertices.push_back(compute_beta(reduced, m, s2a, 2).beta);
      eq.beta_vertices.push_back(compute_beta(reduced, m, s2a + 1, 2).beta);
      eq.alpha_vertices =
          compute_alpha(reduced, eq.k, BoundaryPattern::kBetaKPositive);
    }
  }

  // The defender's payoff is the value of the zero-sum equivalent game:
  // identical at every vertex.
  eq.lp_value = 0.0;
  double attacker_lo = std::numeric_limits<double>::infinity();
  double attacker_hi = -attacker_lo;
  for (std::size_t v = 0; v < eq.beta_vertices.size(); ++v) {
    const auto& beta = eq.beta_vertices[v];
    const double mn = min_lambda_beta(reduced, m.shift, beta);
    const double val =
        mn - std::inner_product(beta.begin(), beta.end(), m.mu.begin(), 0.0);
    if (v == 0) {
      eq.lp_value = val;
    } else if (std::abs(val - eq.lp_value) >
               1e-10 * std::max(1.0, std::abs(eq.lp_value))) {
      throw InternalError("defender value differs across equilibrium vertices");
    }
    const double ua = m.shift - mn;
    attacker_lo = std::min(attacker_lo, ua);
    attacker_hi = std::max(attacker_hi, ua);
  }
  eq.defender_value = eq.lp_value - m.shift;
  eq.attacker_lo = attacker_lo;
  eq.attacker_hi = attacker_hi;
  return eq;
}

}  // namespace advclass
