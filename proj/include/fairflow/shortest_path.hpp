#pragma once

#include <vector>

#include "fairflow/network.hpp"

namespace fairflow {

struct ShortestPathTree {
  std::vector<double> dist;      // +inf where unreachable
  std::vector<int> pred_edge;    // -1 at origin / unreachable
};

// Label-setting Dijkstra; requires nonnegative weights. Equal-cost ties keep
// the lowest predecessor edge id, which makes runs reproducible.
ShortestPathTree shortest_paths_from(const std::vector<std::vector<int>>& adj,
                                     const std::vector<Edge>& edges,
                                     const std::vector<double>& weight, int origin,
                                     int vertex_count);

// Edge ids origin->destination; RoutingError if unreachable.
std::vector<int> extract_path(const ShortestPathTree& tree, const std::vector<Edge>& edges,
                              int origin, int destination);

}  // namespace fairflow
