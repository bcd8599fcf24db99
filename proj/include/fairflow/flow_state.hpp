#pragma once

#include <string>
#include <vector>

#include "fairflow/network.hpp"

namespace fairflow {

struct RecordedPath {
  std::vector<int> edges;  // edge ids tail-to-head along the path
  double weight = 0.0;     // flow carried; per commodity the weights sum to demand
};

struct FlowState {
  double alpha = 0.0;
  std::vector<double> edge_flow;                    // x_e, one per edge
  std::vector<std::vector<double>> commodity_flow;  // [commodity][edge]
  std::vector<std::vector<RecordedPath>> paths;     // [commodity], deterministic order
  double h_so = 0.0;      // total travel time sum x_e t_e(x_e)
  double h_ue = 0.0;      // sum of edge antiderivatives
  double h_interp = 0.0;  // alpha*h_so + (1-alpha)*h_ue
  double relative_gap = 0.0;
  int iterations = 0;
};

// JSON with flows, objectives, gap, and per-commodity paths as vertex
// sequences (edge ids included since parallel edges are legal).
std::string flow_state_to_json(const Network& net, const FlowState& fs);

}  // namespace fairflow
