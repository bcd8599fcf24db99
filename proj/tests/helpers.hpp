#pragma once

// Small independent reference implementations for the tests. Deliberately
// naive: Bellman-Ford instead of Dijkstra, recursive enumeration instead of
// dynamic programming, so they share no code with the library under test.

#include <functional>
#include <limits>
#include <vector>

#include "fairflow/network.hpp"

namespace test_helpers {

inline std::vector<double> bellman_ford(const fairflow::Network& net,
                                        const std::vector<double>& weight, int origin) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<size_t>(net.vertex_count), inf);
  dist[static_cast<size_t>(origin)] = 0.0;
  for (int pass = 0; pass + 1 < net.vertex_count; ++pass) {
    bool changed = false;
    for (size_t e = 0; e < net.edges.size(); ++e) {
      const auto& ed = net.edges[e];
      double cand = dist[static_cast<size_t>(ed.tail)] + weight[e];
      if (cand < dist[static_cast<size_t>(ed.head)]) {
        dist[static_cast<size_t>(ed.head)] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

// All simple paths origin -> destination as edge-id sequences, in DFS order
// over increasing edge id. `limit` caps the count for safety.
inline std::vector<std::vector<int>> enumerate_paths(const fairflow::Network& net, int origin,
                                                     int destination, size_t limit = 100000) {
  std::vector<std::vector<int>> out;
  std::vector<char> visited(static_cast<size_t>(net.vertex_count), 0);
  std::vector<int> stack;
  auto adj = net.out_edges();

  std::function<void(int)> dfs = [&](int v) {
    if (out.size() >= limit) return;
    if (v == destination) {
      out.push_back(stack);
      return;
    }
    visited[static_cast<size_t>(v)] = 1;
    for (int e : adj[static_cast<size_t>(v)]) {
      int h = net.edges[static_cast<size_t>(e)].head;
      if (visited[static_cast<size_t>(h)]) continue;
      stack.push_back(e);
      dfs(h);
      stack.pop_back();
    }
    visited[static_cast<size_t>(v)] = 0;
  };
  dfs(origin);
  return out;
}

inline double path_time(const fairflow::Network& net, const std::vector<int>& path,
                        const std::vector<double>& edge_flow) {
  double t = 0.0;
  for (int e : path) t += net.edges[static_cast<size_t>(e)].fn.value(edge_flow[static_cast<size_t>(e)]);
  return t;
}

}  // namespace test_helpers
