#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace advclass {

/// Minimal dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// maximize objective.x subject to rows[i].x (sense[i]) rhs[i], x >= 0.
/// Senses: 'L' (<=), 'E' (=), 'G' (>=). Free variables are the caller's
/// problem (split into a difference of two nonnegative ones).
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::string senses;
  std::vector<double> rhs;

  explicit LinearProgram(std::size_t vars)
      : num_vars(vars), objective(vars, 0.0) {}

  void add_constraint(std::vector<double> coeffs, char sense, double b);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase simplex. Bland's rule (lowest eligible index enters,
/// lowest basic index leaves on ratio ties) for anti-cycling; deterministic.
/// Problem sizes here are tiny, so no effort is spent on sparsity.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace advclass
