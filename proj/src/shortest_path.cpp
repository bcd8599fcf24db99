#include "fairflow/shortest_path.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "fairflow/errors.hpp"

namespace fairflow {

ShortestPathTree shortest_paths_from(const std::vector<std::vector<int>>& adj,
                                     const std::vector<Edge>& edges,
                                     const std::vector<double>& weight, int origin,
                                     int vertex_count) {
  const double inf = std::numeric_limits<double>::infinity();
  ShortestPathTree tree;
  tree.dist.assign(static_cast<size_t>(vertex_count), inf);
  tree.pred_edge.assign(static_cast<size_t>(vertex_count), -1);
  std::vector<char> settled(static_cast<size_t>(vertex_count), 0);

  using Item = std::pair<double, int>;  // (dist, vertex); heap order is deterministic
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  tree.dist[static_cast<size_t>(origin)] = 0.0;
  heap.push({0.0, origin});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[static_cast<size_t>(v)]) continue;
    settled[static_cast<size_t>(v)] = 1;
    for (int e : adj[static_cast<size_t>(v)]) {
      int h = edges[static_cast<size_t>(e)].head;
      if (settled[static_cast<size_t>(h)]) continue;
      double nd = d + weight[static_cast<size_t>(e)];
      double& cur = tree.dist[static_cast<size_t>(h)];
      int& pred = tree.pred_edge[static_cast<size_t>(h)];
      if (nd < cur) {
        cur = nd;
        pred = e;
        heap.push({nd, h});
      } else if (nd == cur && (pred < 0 || e < pred)) {
        pred = e;  // equal cost: lowest predecessor edge id wins
      }
    }
  }
  return tree;
}

std::vector<int> extract_path(const ShortestPathTree& tree, const std::vector<Edge>& edges,
                              int origin, int destination) {
  if (!(tree.dist[static_cast<size_t>(destination)] <
        std::numeric_limits<double>::infinity()))
    throw RoutingError("no path from " + std::to_string(origin + 1) + " to " +
                       std::to_string(destination + 1));
  std::vector<int> path;
  int v = destination;
  while (v != origin) {
    int e = tree.pred_edge[static_cast<size_t>(v)];
    path.push_back(e);
    v = edges[static_cast<size_t>(e)].tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace fairflow
