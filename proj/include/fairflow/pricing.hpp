#pragma once

#include <string>
#include <vector>

#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"
#include "fairflow/simplex.hpp"
#include "fairflow/solver.hpp"

namespace fairflow {

struct TollVector {
  std::vector<double> toll;  // one per edge, nonnegative
  std::string provenance;    // "marginal_cost" | "lp_dual"
  double alpha = 0.0;
};

// alpha * x_e * t_e'(x_e): the closed-form tolls that make the interpolated
// flow an equilibrium for homogeneous users.
TollVector marginal_tolls(const Network& net, const FlowState& fs);

struct EnforcementCheck {
  double max_flow_deviation = 0.0;  // max_e |x_tolled - x| / (1 + x)
  double max_cost_spread = 0.0;     // relative spread of tolled cost over recorded paths
  bool enforced = false;
  FlowState resolved;
};

// Re-solves selfish routing under t_e + toll_e and compares flows; also checks
// the recorded paths of fs have equalized tolled costs. Homogeneous values of
// time required.
EnforcementCheck verify_enforcement(const Network& net, const FlowState& fs,
                                    const TollVector& tolls, const SolverConfig& cfg = {});

struct UserClass {
  int commodity = 0;
  double value_of_time = 1.0;
  double share = 1.0;  // fraction of the commodity's demand
};

struct RestrictedLp {
  // One demand row per (commodity, class), then one capacity row per edge
  // carrying recorded flow. Columns are recorded paths replicated per class.
  Network const* net = nullptr;
  std::vector<UserClass> classes;            // row order for demand rows
  std::vector<int> capacity_edges;           // edge id per capacity row
  std::vector<double> capacity;              // recorded-path induced edge flow
  std::vector<int> column_class;             // owning class index per path column
  std::vector<std::vector<int>> column_path; // edge ids per path column
  std::vector<double> column_time;           // travel time of the column's path
  double alpha = 0.0;                        // copied from the source flow state
  SimplexProblem problem;
  SimplexResult solution;
};

// Minimum value-of-time weighted travel time over the recorded paths subject
// to demands and edge capacities (the enforcement LP restricted to observed
// paths). Classes default to one per commodity at its value of time.
RestrictedLp heterogeneous_lp(const Network& net, const FlowState& fs,
                              const std::vector<UserClass>& classes = {});

struct TightnessReport {
  bool tight = false;
  double max_slack = 0.0;
  std::vector<double> slack;  // per capacity row
};

// Enforceability precondition: every capacity row binds at the LP optimum.
TightnessReport check_tightness(const RestrictedLp& lp);

// Capacity-row duals as tolls; requires tightness. Values in [-1e-9, 0) are
// clamped to zero, anything lower raises EnforceabilityError.
TollVector dual_tolls(const RestrictedLp& lp);

struct SoundnessReport {
  bool sound = false;
  double worst_slack = 0.0;  // min over classes of (shortest tolled cost - best recorded)
};

// No class may have an unrecorded path strictly cheaper under
// value_of_time * t_e(x_e) + toll_e than its best recorded path.
SoundnessReport enforcement_soundness(const Network& net, const FlowState& fs,
                                      const RestrictedLp& lp, const TollVector& tolls);

std::string tolls_to_csv(const TollVector& tolls);
std::vector<UserClass> classes_from_json(const std::string& text);

}  // namespace fairflow
