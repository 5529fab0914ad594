#pragma once

#include "tropls/rational.hpp"

#include <optional>
#include <vector>

namespace tropls {

// Exact linear programs over the rationals in inequality form with free variables.
// Sized for few variables and many constraints: the solver pivots on the dual,
// whose tableau has one row per variable.
struct LinearProgram {
  explicit LinearProgram(std::size_t vars) : vars(vars) {}

  std::size_t vars;
  std::vector<std::vector<Rational>> rows;  // rows[i] . x <= rhs[i]
  std::vector<Rational> rhs;
  std::vector<std::vector<Rational>> eq_rows;  // eq_rows[i] . x == eq_rhs[i]
  std::vector<Rational> eq_rhs;

  void less_equal(std::vector<Rational> row, Rational bound);
  void equal(std::vector<Rational> row, Rational value);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;
};

LpResult maximize(const LinearProgram& lp, const std::vector<Rational>& objective);

bool is_feasible(const LinearProgram& lp);

// A point where every row flagged strict holds with slack >= the returned margin,
// the margin being as large as possible up to 1. Empty when no positive margin exists.
struct InteriorPoint {
  std::vector<Rational> x;
  Rational margin;
};
std::optional<InteriorPoint> interior_point(const LinearProgram& lp, const std::vector<bool>& strict);

// Rank of a dense rational matrix.
std::size_t matrix_rank(std::vector<std::vector<Rational>> rows);

}  // namespace tropls
