#include "fairflow/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fairflow {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kBlandAfter = 200;     // degenerate pivots before switching rules
constexpr int kRefactorEvery = 300;  // rebuild the inverse to shed drift

// Columns 0..S-1 are structural, S..S+rows-1 the phase-1 artificials.
struct Tableau {
  const SimplexProblem* p = nullptr;
  int rows = 0;
  int structurals = 0;
  std::vector<std::vector<double>> binv;  // dense basis inverse
  std::vector<int> basis;                 // basic column per row
  std::vector<double> xb;                 // basic values, kept >= 0

  bool is_artificial(int col) const { return col >= structurals; }

  // Dense copy of column `col` of [A | I].
  std::vector<double> dense_column(int col) const {
    std::vector<double> a(static_cast<size_t>(rows), 0.0);
    if (is_artificial(col)) {
      a[static_cast<size_t>(col - structurals)] = 1.0;
    } else {
      for (const auto& [r, v] : p->columns[static_cast<size_t>(col)])
        a[static_cast<size_t>(r)] += v;
    }
    return a;
  }

  std::vector<double> apply_binv(const std::vector<double>& a) const {
    std::vector<double> d(static_cast<size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < rows; ++j)
        s += binv[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(j)];
      d[static_cast<size_t>(i)] = s;
    }
    return d;
  }

  // y = c_B B^-1 for the given per-column cost.
  std::vector<double> duals(const std::vector<double>& cost_all) const {
    std::vector<double> y(static_cast<size_t>(rows), 0.0);
    for (int j = 0; j < rows; ++j) {
      double s = 0.0;
      for (int i = 0; i < rows; ++i)
        s += cost_all[static_cast<size_t>(basis[static_cast<size_t>(i)])] *
             binv[static_cast<size_t>(i)][static_cast<size_t>(j)];
      y[static_cast<size_t>(j)] = s;
    }
    return y;
  }

  double reduced_cost(int col, const std::vector<double>& cost_all,
                      const std::vector<double>& y) const {
    double s = cost_all[static_cast<size_t>(col)];
    if (is_artificial(col)) return s - y[static_cast<size_t>(col - structurals)];
    for (const auto& [r, v] : p->columns[static_cast<size_t>(col)])
      s -= y[static_cast<size_t>(r)] * v;
    return s;
  }

  void refactor() {
    // Rebuild binv from scratch by Gauss-Jordan on the basis matrix.
    std::vector<std::vector<double>> m(static_cast<size_t>(rows),
                                       std::vector<double>(static_cast<size_t>(2 * rows), 0.0));
    for (int c = 0; c < rows; ++c) {
      auto a = dense_column(basis[static_cast<size_t>(c)]);
      for (int r = 0; r < rows; ++r) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = a[static_cast<size_t>(r)];
    }
    for (int r = 0; r < rows; ++r) m[static_cast<size_t>(r)][static_cast<size_t>(rows + r)] = 1.0;
    for (int c = 0; c < rows; ++c) {
      int piv = -1;
      double best = 0.0;
      for (int r = c; r < rows; ++r) {
        double v = std::abs(m[static_cast<size_t>(r)][static_cast<size_t>(c)]);
        if (v > best) { best = v; piv = r; }
      }
      if (piv < 0 || best < kPivotTol)
        throw std::logic_error("simplex: singular basis during refactorization");
      std::swap(m[static_cast<size_t>(c)], m[static_cast<size_t>(piv)]);
      double inv = 1.0 / m[static_cast<size_t>(c)][static_cast<size_t>(c)];
      for (auto& v : m[static_cast<size_t>(c)]) v *= inv;
      for (int r = 0; r < rows; ++r) {
        if (r == c) continue;
        double f = m[static_cast<size_t>(r)][static_cast<size_t>(c)];
        if (f == 0.0) continue;
        for (int j = 0; j < 2 * rows; ++j)
          m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(c)][static_cast<size_t>(j)];
      }
    }
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < rows; ++j)
        binv[static_cast<size_t>(r)][static_cast<size_t>(j)] = m[static_cast<size_t>(r)][static_cast<size_t>(rows + j)];
    // Recompute basic values from the fresh inverse.
    std::vector<double> fresh(static_cast<size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < rows; ++j)
        s += binv[static_cast<size_t>(i)][static_cast<size_t>(j)] * p->rhs[static_cast<size_t>(j)];
      fresh[static_cast<size_t>(i)] = std::max(0.0, s);
    }
    xb = std::move(fresh);
  }

  // One phase of minimization under cost_all; `allow` filters enterable columns.
  // Returns total pivot count performed.
  int run(const std::vector<double>& cost_all, const std::vector<char>& allow,
          int pivots_so_far) {
    int total_cols = structurals + rows;
    int degenerate_streak = 0;
    int pivots = 0;
    for (;;) {
      auto y = duals(cost_all);
      bool bland = degenerate_streak >= kBlandAfter;
      int enter = -1;
      double best = -1e-9;  // entering needs a strictly negative reduced cost
      for (int c = 0; c < total_cols; ++c) {
        if (!allow[static_cast<size_t>(c)]) continue;
        double rc = reduced_cost(c, cost_all, y);
        if (rc >= -1e-9) continue;
        if (bland) { enter = c; break; }  // lowest eligible index
        if (rc < best) { best = rc; enter = c; }
      }
      if (enter < 0) break;  // optimal for this phase

      auto d = apply_binv(dense_column(enter));
      // Ratio test. Artificial-basic rows with d_i < -tol leave at ratio 0 so
      // artificials are driven out whenever the entering column lets them.
      // Ties go to the largest pivot magnitude for stability, except under
      // Bland's rule where the lowest basic index is required for termination.
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < rows; ++i) {
        double di = d[static_cast<size_t>(i)];
        double ratio;
        if (di > kPivotTol) {
          ratio = xb[static_cast<size_t>(i)] / di;
        } else if (di < -kPivotTol && is_artificial(basis[static_cast<size_t>(i)]) &&
                   xb[static_cast<size_t>(i)] <= kPivotTol) {
          ratio = 0.0;
        } else {
          continue;
        }
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12) {
          bool prefer = bland ? basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)]
                              : std::abs(di) > std::abs(d[static_cast<size_t>(leave)]);
          if (prefer) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave < 0)
        throw std::logic_error("simplex: unbounded direction in a bounded problem");

      if (best_ratio <= 1e-12) ++degenerate_streak;
      else degenerate_streak = 0;

      // Gauss-Jordan update of binv and xb around (leave, enter).
      double piv = d[static_cast<size_t>(leave)];
      auto& brow = binv[static_cast<size_t>(leave)];
      for (auto& v : brow) v /= piv;
      double moved = best_ratio;
      for (int i = 0; i < rows; ++i) {
        if (i == leave) continue;
        double f = d[static_cast<size_t>(i)];
        if (f == 0.0) continue;
        auto& row = binv[static_cast<size_t>(i)];
        for (int j = 0; j < rows; ++j) row[static_cast<size_t>(j)] -= f * brow[static_cast<size_t>(j)];
        xb[static_cast<size_t>(i)] = std::max(0.0, xb[static_cast<size_t>(i)] - f * moved);
      }
      xb[static_cast<size_t>(leave)] = moved;
      basis[static_cast<size_t>(leave)] = enter;
      ++pivots;
      if ((pivots_so_far + pivots) % kRefactorEvery == 0) refactor();
    }
    return pivots;
  }

  // Drive one positive nonbasic column to zero or into the basis, keeping the
  // current point feasible. Used by the warm start; at most one pivot.
  int push_out(int col, double value) {
    auto d = apply_binv(dense_column(col));
    // Reducing x_col by t moves the basics along +d; rows with d_i < 0 block.
    double t = value;
    for (int i = 0; i < rows; ++i) {
      double di = d[static_cast<size_t>(i)];
      if (di < -kPivotTol) t = std::min(t, xb[static_cast<size_t>(i)] / -di);
    }
    if (t >= value - 1e-15) {
      for (int i = 0; i < rows; ++i)
        xb[static_cast<size_t>(i)] =
            std::max(0.0, xb[static_cast<size_t>(i)] + value * d[static_cast<size_t>(i)]);
      return 0;
    }
    // Blocked: move to the boundary, then bring the column into the basis at
    // the blocking row (largest magnitude among ties, for stability).
    int block = -1;
    for (int i = 0; i < rows; ++i) {
      double di = d[static_cast<size_t>(i)];
      if (di >= -kPivotTol) continue;
      if (xb[static_cast<size_t>(i)] / -di <= t + 1e-12 &&
          (block < 0 || std::abs(di) > std::abs(d[static_cast<size_t>(block)])))
        block = i;
    }
    for (int i = 0; i < rows; ++i)
      xb[static_cast<size_t>(i)] =
          std::max(0.0, xb[static_cast<size_t>(i)] + t * d[static_cast<size_t>(i)]);
    double piv = d[static_cast<size_t>(block)];
    auto& brow = binv[static_cast<size_t>(block)];
    for (auto& v : brow) v /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == block) continue;
      double f = d[static_cast<size_t>(i)];
      if (f == 0.0) continue;
      auto& row = binv[static_cast<size_t>(i)];
      for (int j = 0; j < rows; ++j) row[static_cast<size_t>(j)] -= f * brow[static_cast<size_t>(j)];
    }
    basis[static_cast<size_t>(block)] = col;
    xb[static_cast<size_t>(block)] = value - t;
    return 1;
  }
};

void validate_problem(const SimplexProblem& problem) {
  const int rows = problem.rows;
  const int S = static_cast<int>(problem.columns.size());
  if (static_cast<int>(problem.cost.size()) != S)
    throw std::invalid_argument("solve_simplex: cost/columns size mismatch");
  if (static_cast<int>(problem.rhs.size()) != rows)
    throw std::invalid_argument("solve_simplex: rhs/rows size mismatch");
  for (double b : problem.rhs)
    if (b < 0.0) throw std::invalid_argument("solve_simplex: rhs must be nonnegative");
}

Tableau make_tableau(const SimplexProblem& problem) {
  Tableau t;
  t.p = &problem;
  t.rows = problem.rows;
  t.structurals = static_cast<int>(problem.columns.size());
  t.binv.assign(static_cast<size_t>(t.rows),
                std::vector<double>(static_cast<size_t>(t.rows), 0.0));
  for (int i = 0; i < t.rows; ++i) t.binv[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
  t.basis.resize(static_cast<size_t>(t.rows));
  t.xb = problem.rhs;
  for (int i = 0; i < t.rows; ++i) t.basis[static_cast<size_t>(i)] = t.structurals + i;
  return t;
}

// Phase 2 plus solution assembly, shared by the cold and warm entry points.
SimplexResult finish(Tableau& t, const SimplexProblem& problem, int pivots_so_far) {
  const int rows = problem.rows;
  const int S = static_cast<int>(problem.columns.size());
  SimplexResult res;
  res.pivots = pivots_so_far;

  std::vector<double> phase2(static_cast<size_t>(S + rows), 0.0);
  for (int c = 0; c < S; ++c) phase2[static_cast<size_t>(c)] = problem.cost[static_cast<size_t>(c)];
  std::vector<char> allow(static_cast<size_t>(S + rows), 0);
  for (int c = 0; c < S; ++c) allow[static_cast<size_t>(c)] = 1;
  res.pivots += t.run(phase2, allow, res.pivots);

  res.feasible = true;
  res.x.assign(static_cast<size_t>(S), 0.0);
  res.basis.assign(static_cast<size_t>(rows), -1);
  for (int i = 0; i < rows; ++i) {
    int c = t.basis[static_cast<size_t>(i)];
    if (!t.is_artificial(c)) {
      res.x[static_cast<size_t>(c)] = t.xb[static_cast<size_t>(i)];
      res.basis[static_cast<size_t>(i)] = c;
    }
  }
  res.objective = 0.0;
  for (int c = 0; c < S; ++c) res.objective += problem.cost[static_cast<size_t>(c)] * res.x[static_cast<size_t>(c)];
  res.dual = t.duals(phase2);
  return res;
}

}  // namespace

SimplexResult solve_simplex(const SimplexProblem& problem) {
  validate_problem(problem);
  const int rows = problem.rows;
  const int S = static_cast<int>(problem.columns.size());

  Tableau t = make_tableau(problem);

  SimplexResult res;
  if (rows == 0) {
    res.feasible = true;
    res.x.assign(static_cast<size_t>(S), 0.0);
    return res;
  }

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1(static_cast<size_t>(S + rows), 0.0);
  for (int i = 0; i < rows; ++i) phase1[static_cast<size_t>(S + i)] = 1.0;
  std::vector<char> allow_all(static_cast<size_t>(S + rows), 1);
  int pivots = t.run(phase1, allow_all, 0);

  double infeas = 0.0;
  for (int i = 0; i < rows; ++i)
    if (t.is_artificial(t.basis[static_cast<size_t>(i)])) infeas += t.xb[static_cast<size_t>(i)];
  double scale = 0.0;
  for (double b : problem.rhs) scale = std::max(scale, std::abs(b));
  if (infeas > 1e-7 * (1.0 + scale)) {
    res.feasible = false;
    res.pivots = pivots;
    return res;
  }

  return finish(t, problem, pivots);
}

SimplexResult solve_simplex(const SimplexProblem& problem, const SimplexWarmStart& warm) {
  validate_problem(problem);
  const int rows = problem.rows;
  const int S = static_cast<int>(problem.columns.size());
  if (rows == 0 || static_cast<int>(warm.x.size()) != S ||
      static_cast<int>(warm.basis_columns.size()) != rows)
    return solve_simplex(problem);

  // The point must be nonnegative and satisfy the rows before it is trusted.
  double scale = 0.0;
  for (double b : problem.rhs) scale = std::max(scale, std::abs(b));
  std::vector<double> residual = problem.rhs;
  for (int c = 0; c < S; ++c) {
    double v = warm.x[static_cast<size_t>(c)];
    if (v < 0.0) return solve_simplex(problem);
    if (v == 0.0) continue;
    for (const auto& [r, coef] : problem.columns[static_cast<size_t>(c)])
      residual[static_cast<size_t>(r)] -= coef * v;
  }
  for (double r : residual)
    if (std::abs(r) > 1e-7 * (1.0 + scale)) return solve_simplex(problem);

  std::vector<char> in_basis(static_cast<size_t>(S), 0);
  for (int c : warm.basis_columns) {
    if (c < 0 || c >= S || in_basis[static_cast<size_t>(c)]) return solve_simplex(problem);
    in_basis[static_cast<size_t>(c)] = 1;
  }

  Tableau t = make_tableau(problem);
  for (int i = 0; i < rows; ++i) t.basis[static_cast<size_t>(i)] = warm.basis_columns[static_cast<size_t>(i)];
  try {
    t.refactor();
  } catch (const std::logic_error&) {
    return solve_simplex(problem);  // singular hint, start cold
  }
  for (int i = 0; i < rows; ++i)
    t.xb[static_cast<size_t>(i)] = warm.x[static_cast<size_t>(t.basis[static_cast<size_t>(i)])];

  int pivots = 0;
  for (int c = 0; c < S; ++c) {
    if (in_basis[static_cast<size_t>(c)]) continue;
    double v = warm.x[static_cast<size_t>(c)];
    if (v <= kPivotTol) continue;
    pivots += t.push_out(c, v);
  }
  // All nonbasic columns now sit at zero, so the exact basic values are
  // B^-1 rhs; recomputing also sheds the push phase's drift.
  t.refactor();

  return finish(t, problem, pivots);
}

}  // namespace fairflow
