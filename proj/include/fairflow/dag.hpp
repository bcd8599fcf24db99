#pragma once

#include <vector>

#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"

namespace fairflow {

// Per-commodity subgraph of edges carrying more than threshold_fraction of the
// demand. Directed cycles (possible in a decomposed flow) are cancelled by
// subtracting the bottleneck before the acyclicity and conservation checks.
struct CommodityDag {
  int commodity = -1;
  std::vector<int> edge_ids;
  std::vector<double> kept_flow;   // per kept edge, after cancellation
  std::vector<int> topo_vertices;  // vertices of the subgraph in topological order
};

CommodityDag build_commodity_dag(const Network& net, const FlowState& fs, int k,
                                 double threshold_fraction = 1e-7);

struct DagPathExtremes {
  double shortest = 0.0;
  double longest = 0.0;
};

// Min and max origin->destination path travel time inside the DAG, weights
// t_e(x_e) at total flow. Longest path runs the same topological-order DP on
// negated weights. DecompositionError if the destination is unreachable.
DagPathExtremes dag_path_extremes(const Network& net, const FlowState& fs,
                                  const CommodityDag& dag);

}  // namespace fairflow
