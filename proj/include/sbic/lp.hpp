#pragma once

#include <vector>

#include "sbic/rational.hpp"

namespace sbic {

enum class Sense { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// maximize c.x subject to rows (A_i . x  sense_i  b_i) and x >= 0.
struct LinearProgram {
  std::size_t variables = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Sense> senses;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;

  void add_row(std::vector<Rational> coefficients, Sense sense, Rational b);
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

// Dense two-phase simplex in exact arithmetic with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

using Matrix = std::vector<std::vector<Rational>>;

std::size_t matrix_rank(Matrix rows);

// Basis of {x : rows x = 0}.
Matrix null_space(Matrix rows, std::size_t columns);

}  // namespace sbic
