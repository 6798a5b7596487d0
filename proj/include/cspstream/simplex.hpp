#pragma once

#include <utility>
#include <vector>

#include "rational.hpp"

namespace cspstream {

// Equality-form LP: maximize c.x subject to A x = b, x >= 0.
// Solved by a dense-tableau two-phase primal simplex over exact rationals.
// Dantzig pricing by default; Bland's rule kicks in after a run of
// degenerate pivots, which guarantees termination.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Rational> objective;

  struct Row {
    std::vector<std::pair<int, Rational>> terms;
    Rational rhs;
  };
  std::vector<Row> rows;

  int add_var() {
    objective.emplace_back(0);
    return num_vars++;
  }
  void set_objective(int var, Rational coeff) { objective[static_cast<size_t>(var)] = std::move(coeff); }
  int add_row(Rational rhs) {
    rows.push_back(Row{{}, std::move(rhs)});
    return static_cast<int>(rows.size()) - 1;
  }
  void add_term(int row, int var, Rational coeff) {
    rows[static_cast<size_t>(row)].terms.emplace_back(var, std::move(coeff));
  }
};

struct LpResult {
  bool feasible = false;
  Rational value;            // objective at optimum
  std::vector<Rational> x;   // primal solution, size num_vars
};

LpResult solve_lp(const LinearProgram& lp);

// Statistics for curiosity/tests.
struct SimplexStats {
  long phase1_pivots = 0;
  long phase2_pivots = 0;
};
LpResult solve_lp(const LinearProgram& lp, SimplexStats* stats);

}  // namespace cspstream
