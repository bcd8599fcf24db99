#pragma once

#include <string>
#include <vector>

#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"
#include "fairflow/solver.hpp"

namespace fairflow {

struct SweepRecord {
  double alpha = 0.0;  // interpolation parameter (gamma for the baseline sweep)
  double h_so = 0.0;
  double h_ue = 0.0;
  double ineff_ratio = 0.0;
  double gap = 0.0;
  double u = 0.0;
  double envy_free = 0.0;
  double used_nash = 0.0;
  double gini = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ascending alpha
  std::vector<FlowState> states;     // aligned with records when kept
  // adjacent grid points whose headline unfairness jumps by more than 0.1
  std::vector<std::pair<double, double>> outliers;
  double so_reference = 0.0;  // smallest h_so seen; the ratio denominator
};

// {0, step, 2 step, ..., 1} with both endpoints exact.
std::vector<double> alpha_grid(double step);

// Independent cold-start solves per grid alpha; parallel across alphas with a
// deterministic merge.
SweepResult dense_sweep(const Network& net, double step, const SolverConfig& cfg = {},
                        int jobs = 1, bool keep_states = false);

// Baseline: per-commodity convex combination of the two endpoint solutions,
// metrics re-evaluated on the interpolated state (no re-solving).
SweepResult i_solution_sweep(const Network& net, double step, const SolverConfig& cfg = {},
                             int jobs = 1, bool keep_states = false);

struct ParetoPoint {
  double beta = 0.0;
  std::string method;  // "itap" | "isolution"
  double param = 0.0;  // the grid alpha/gamma selected
  double ineff_ratio = 0.0;
  double unfairness = 0.0;
};

enum class GateMetric { kU, kEnvyFree, kUsedNash, kGini };

// Cheapest record whose gated metric stays within beta (+slack, absorbing
// solver noise). The alpha=0 record is always a candidate: it is the
// guaranteed-fair fallback. Ties go to the smaller alpha.
ParetoPoint select_beta_so(const std::vector<SweepRecord>& records, double beta,
                           GateMetric gate = GateMetric::kU, double slack = 1e-4,
                           const std::string& method = "itap");

std::vector<ParetoPoint> pareto_frontier(const std::vector<SweepRecord>& records,
                                         const std::vector<double>& betas,
                                         GateMetric gate = GateMetric::kU,
                                         double slack = 1e-4,
                                         const std::string& method = "itap");

// Worst-case inefficiency cap at alpha from endpoint objective values:
// min of the price-of-anarchy branch and the interpolation branch.
// alpha must lie strictly inside (0,1).
double ineff_bound(const std::vector<SweepRecord>& records, double alpha);
// First branch alone: h_so(alpha=0) / h_so(alpha=1).
double poa_upper(const std::vector<SweepRecord>& records);
// Parameter where the two branches cross; 0 when the endpoints coincide.
double alpha_star_crossover(const std::vector<SweepRecord>& records);
// Largest alpha keeping the degree-based fairness guarantee at beta:
// min(1, (beta-1)/max_degree).
double feasible_alpha(const Network& net, double beta);

std::string sweep_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> sweep_from_csv(const std::string& text);
std::string pareto_to_csv(const std::vector<ParetoPoint>& points);

}  // namespace fairflow
