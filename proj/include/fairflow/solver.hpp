#pragma once

#include <vector>

#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"

namespace fairflow {

struct SolverConfig {
  int max_iterations = 100;
  double target_relative_gap = 1e-5;
  double line_search_tolerance = 1e-10;  // bisection bracket width on [0,1]
  double path_record_threshold = 1e-4;   // prune paths below this fraction of demand
  // Reuse the previous direction (conjugate mix) instead of the raw
  // all-or-nothing target. Same fixed point, much faster tail convergence.
  bool conjugate_direction = false;
  // Finishing phase: Newton shifts between each commodity's recorded paths
  // until their interpolated costs equalize. Drains the decayed remnants of
  // early iterations so the recorded set matches the positive-path set; 0
  // disables.
  int equilibrate_rounds = 50;
};

struct Objectives {
  double h_so = 0.0;
  double h_ue = 0.0;
  double h_interp = 0.0;
};

struct AonResult {
  std::vector<double> edge_flow;
  std::vector<std::vector<int>> path;  // one edge-id path per commodity
  double cost = 0.0;                   // sum_e c_e(x_e,alpha) * y_e
};

struct SolveTrace {
  std::vector<double> objective;  // h_interp after each iteration
  std::vector<double> gap;
  std::vector<double> step;
};

Objectives objective_values(const Network& net, const std::vector<double>& edge_flow,
                            double alpha);

// All-or-nothing loading under costs c_e(x_e, alpha) frozen at x.
AonResult all_or_nothing(const Network& net, const std::vector<double>& x, double alpha);

// Exact bisection on the directional derivative of the blended objective
// along x + lambda (y - x); the derivative is nondecreasing in lambda.
double line_search(const Network& net, const std::vector<double>& x,
                   const std::vector<double>& y, double alpha, double tolerance = 1e-10);

// (c.x - c.y) / c.x with y the all-or-nothing response; 0 without demand.
double relative_gap(const Network& net, const std::vector<double>& x, double alpha);

// Frank-Wolfe on the blended objective. Cold start from the free-flow
// all-or-nothing; stops at max_iterations or target gap, whichever first.
FlowState solve(const Network& net, double alpha, const SolverConfig& cfg = {},
                SolveTrace* trace = nullptr);

}  // namespace fairflow
