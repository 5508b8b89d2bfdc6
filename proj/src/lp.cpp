#include "advclass/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "advclass/errors.hpp"

namespace advclass {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr std::size_t kMaxIters = 200000;

struct Tableau {
  std::size_t m = 0;        // constraint rows
  std::size_t n = 0;        // columns (all variables)
  Matrix t;                 // m x (n+1), last column = rhs
  std::vector<std::size_t> basis;      // per row, basic variable index
  std::vector<double> d;               // reduced costs, size n
  double value = 0.0;

  void pivot(std::size_t r, std::size_t c) {
    const double piv = t(r, c);
    for (std::size_t j = 0; j <= n; ++j) t(r, j) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j) t(i, j) -= f * t(r, j);
    }
    const double fd = d[c];
    if (fd != 0.0) {
      for (std::size_t j = 0; j < n; ++j) d[j] -= fd * t(r, j);
      value += fd * t(r, n);
    }
    basis[r] = c;
  }

  // Reduced costs of `phi` w.r.t. the current basis.
  void load_objective(const std::vector<double>& phi) {
    d = phi;
    value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = phi[basis[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) d[j] -= cb * t(i, j);
      value += cb * t(i, n);
    }
  }

  // Bland iterations. `allowed` masks out forbidden columns (artificials in
  // phase 2). Returns false when unbounded.
  bool iterate(const std::vector<char>& allowed) {
    for (std::size_t iter = 0; iter < kMaxIters; ++iter) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (allowed[j] && d[j] > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == n) return true;  // optimal
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a > kPivotTol) best_ratio = std::min(best_ratio, t(i, n) / a);
      }
      if (best_ratio == std::numeric_limits<double>::infinity()) {
        return false;  // unbounded
      }
      std::size_t leave = m;
      for (std::size_t i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a > kPivotTol && t(i, n) / a <= best_ratio + kPivotTol) {
          if (leave == m || basis[i] < basis[leave]) leave = i;
        }
      }
      pivot(leave, enter);
    }
    throw InternalError("simplex exceeded the iteration cap");
  }
};

}  // namespace

void LinearProgram::add_constraint(std::vector<double> coeffs, char sense, double b) {
  if (coeffs.size() != num_vars) throw InputError("LP row has wrong width");
  if (sense != 'L' && sense != 'E' && sense != 'G') {
    throw InputError("LP row sense must be one of L/E/G");
  }
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size();
  const std::size_t nv = lp.num_vars;

  // Column layout: original vars, then one slack/surplus per L/G row, then
  // one artificial per row that needs it.
  std::size_t num_slacks = 0;
  for (char s : lp.senses) {
    if (s != 'E') ++num_slacks;
  }
  std::vector<char> row_sense(lp.senses.begin(), lp.senses.end());
  std::vector<double> row_sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      row_sign[i] = -1.0;
      if (row_sense[i] == 'L') row_sense[i] = 'G';
      else if (row_sense[i] == 'G') row_sense[i] = 'L';
    }
  }

  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (row_sense[i] != 'L') artificial_rows.push_back(i);
  }
  const std::size_t n = nv + num_slacks + artificial_rows.size();

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t = Matrix(m, n + 1);
  tab.basis.assign(m, n);

  std::size_t slack_col = nv;
  std::size_t art_col = nv + num_slacks;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nv; ++j) tab.t(i, j) = row_sign[i] * lp.rows[i][j];
    tab.t(i, n) = row_sign[i] * lp.rhs[i];
    if (lp.senses[i] != 'E') {
      tab.t(i, slack_col) = (row_sense[i] == 'L') ? 1.0 : -1.0;
      if (row_sense[i] == 'L') tab.basis[i] = slack_col;
      ++slack_col;
    }
    if (row_sense[i] != 'L') {
      tab.t(i, art_col) = 1.0;
      tab.basis[i] = art_col;
      ++art_col;
    }
  }

  std::vector<char> allowed(n, 1);

  // Phase 1: drive the artificials to zero.
  if (!artificial_rows.empty()) {
    std::vector<double> phi(n, 0.0);
    for (std::size_t j = nv + num_slacks; j < n; ++j) phi[j] = -1.0;
    tab.load_objective(phi);
    if (!tab.iterate(allowed)) throw InternalError("phase-1 LP unbounded");
    if (tab.value < -kFeasTol) return {LpStatus::kInfeasible, 0.0, {}};
    // Pivot leftover artificials out of the basis where possible; a row that
    // cannot release its artificial is redundant and gets dropped.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < tab.m; ++i) {
      if (tab.basis[i] >= nv + num_slacks) {
        bool released = false;
        for (std::size_t j = 0; j < nv + num_slacks; ++j) {
          if (std::abs(tab.t(i, j)) > kFeasTol) {
            tab.pivot(i, j);
            released = true;
            break;
          }
        }
        if (!released) continue;  // redundant row
      }
      keep.push_back(i);
    }
    if (keep.size() != tab.m) {
      Matrix compact(keep.size(), n + 1);
      std::vector<std::size_t> basis2;
      for (std::size_t r = 0; r < keep.size(); ++r) {
        for (std::size_t j = 0; j <= n; ++j) compact(r, j) = tab.t(keep[r], j);
        basis2.push_back(tab.basis[keep[r]]);
      }
      tab.t = std::move(compact);
      tab.basis = std::move(basis2);
      tab.m = keep.size();
    }
  }
  for (std::size_t j = nv + num_slacks; j < n; ++j) allowed[j] = 0;

  std::vector<double> phi(n, 0.0);
  for (std::size_t j = 0; j < nv; ++j) phi[j] = lp.objective[j];
  tab.load_objective(phi);
  if (!tab.iterate(allowed)) return {LpStatus::kUnbounded, 0.0, {}};

  LpSolution out;
  out.status = LpStatus::kOptimal;
  out.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < tab.m; ++i) {
    if (tab.basis[i] < nv) out.x[tab.basis[i]] = tab.t(i, n);
  }
  out.objective = tab.value;
  return out;
}

}  // namespace advclass
