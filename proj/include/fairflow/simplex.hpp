#pragma once

#include <utility>
#include <vector>

namespace fairflow {

// min cost.x  s.t.  A x = rhs, x >= 0, rhs >= 0.
// Columns are sparse (row, value) lists.
struct SimplexProblem {
  int rows = 0;
  std::vector<std::vector<std::pair<int, double>>> columns;
  std::vector<double> cost;
  std::vector<double> rhs;
};

struct SimplexResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;     // structural solution
  std::vector<double> dual;  // row duals from the final basis
  std::vector<int> basis;    // basic column per row (-1: leftover artificial)
  int pivots = 0;
};

// Two-phase revised simplex, dense basis inverse. Deterministic: Dantzig
// pricing with lowest-index ties, switching to Bland's rule during degenerate
// stalls so cycling cannot occur.
SimplexResult solve_simplex(const SimplexProblem& problem);

// A known feasible point plus a nonsingular structural basis consistent with
// it: every positive x outside basis_columns is pushed to a basic solution
// before phase 2, so the artificial phase 1 is skipped entirely. On highly
// degenerate instances that phase is where simplex stalls, so callers that
// can exhibit feasibility should. Falls back to the cold start if the point
// or basis does not check out.
struct SimplexWarmStart {
  std::vector<double> x;           // per structural column, A x = rhs, x >= 0
  std::vector<int> basis_columns;  // one structural column per row
};

SimplexResult solve_simplex(const SimplexProblem& problem, const SimplexWarmStart& warm);

}  // namespace fairflow
