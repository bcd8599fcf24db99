#pragma once

#include <vector>

#include "fairflow/network.hpp"

namespace fairflow {

// Closed-form/brute-force references the tests compare the solver against.
// Deliberately independent: no Frank-Wolfe, no Dijkstra.

struct PigouSolution {
  double x1 = 0.0;
  double x2 = 0.0;
  double total_time = 0.0;
  double ratio = 0.0;         // t1 / t2 when both flows positive, else 1
  double kkt_residual = 0.0;  // |c1 - c2| at the returned split (0 at corners)
};

// Optimality condition of the blended objective on the two-edge instance,
// solved by bisection. Boundary ties resolve toward the second edge.
PigouSolution pigou_solve(int m, double eps, double demand, double alpha);

// Exhaustive simplex-grid minimization of the blended objective for parallel
// single-commodity networks with at most 3 edges. Ties keep the last grid
// point scanned (highest flow on the later edges).
std::vector<double> grid_search_optimum(const Network& net, double alpha, double resolution);

struct PigouBetaSo {
  double x1 = 0.0;
  double x2 = 0.0;
  double total_time = 0.0;
  double unfairness = 0.0;  // max(t1/t2, t2/t1) over positive edges
};

// Grid search for the cheapest split whose unfairness stays within beta.
PigouBetaSo pigou_beta_so(int m, double eps, double demand, double beta,
                          double resolution = 1e-4);

}  // namespace fairflow
