#include "fairflow/dag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairflow/errors.hpp"

namespace fairflow {

namespace {

// Directed cycle through kept edges, as edge ids; empty if acyclic.
std::vector<int> find_cycle(const Network& net, const std::vector<int>& kept) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(net.vertex_count));
  for (int e : kept) adj[static_cast<size_t>(net.edges[static_cast<size_t>(e)].tail)].push_back(e);
  // iterative DFS, colors 0/1/2; via[] remembers the tree edge into each vertex
  std::vector<char> color(static_cast<size_t>(net.vertex_count), 0);
  std::vector<int> via(static_cast<size_t>(net.vertex_count), -1);
  for (int start = 0; start < net.vertex_count; ++start) {
    if (color[static_cast<size_t>(start)] != 0) continue;
    std::vector<std::pair<int, size_t>> stack{{start, 0}};
    color[static_cast<size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[static_cast<size_t>(v)].size()) {
        int e = adj[static_cast<size_t>(v)][idx++];
        int h = net.edges[static_cast<size_t>(e)].head;
        if (color[static_cast<size_t>(h)] == 0) {
          color[static_cast<size_t>(h)] = 1;
          via[static_cast<size_t>(h)] = e;
          stack.push_back({h, 0});
        } else if (color[static_cast<size_t>(h)] == 1) {
          // back edge: walk tree edges from v up to h
          std::vector<int> cycle{e};
          int cur = v;
          while (cur != h) {
            int pe = via[static_cast<size_t>(cur)];
            cycle.push_back(pe);
            cur = net.edges[static_cast<size_t>(pe)].tail;
          }
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
      } else {
        color[static_cast<size_t>(v)] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

CommodityDag build_commodity_dag(const Network& net, const FlowState& fs, int k,
                                 double threshold_fraction) {
  if (k < 0 || static_cast<size_t>(k) >= net.commodities.size())
    throw std::invalid_argument("build_commodity_dag: commodity id out of range");
  if (fs.paths.size() != net.commodities.size())
    throw std::invalid_argument("build_commodity_dag: flow state does not match network");
  const double demand = net.commodities[static_cast<size_t>(k)].demand;
  const double cut = threshold_fraction * demand;
  // Commodity edge flow induced by the recorded (already pruned) paths; the
  // raw running decomposition would drag in decayed early-iteration dust.
  std::vector<double> flow(net.edges.size(), 0.0);
  for (const auto& p : fs.paths[static_cast<size_t>(k)])
    for (int e : p.edges) flow[static_cast<size_t>(e)] += p.weight;

  auto collect = [&] {
    std::vector<int> kept;
    for (size_t e = 0; e < flow.size(); ++e)
      if (flow[e] > cut) kept.push_back(static_cast<int>(e));
    return kept;
  };

  std::vector<int> kept = collect();
  // cancel directed cycles: subtract the bottleneck until the subgraph is acyclic
  for (size_t guard = 0; guard <= net.edges.size() + 1; ++guard) {
    std::vector<int> cycle = find_cycle(net, kept);
    if (cycle.empty()) break;
    if (guard == net.edges.size() + 1)
      throw std::logic_error("build_commodity_dag: cycle cancellation failed to terminate");
    double bottleneck = std::numeric_limits<double>::infinity();
    for (int e : cycle) bottleneck = std::min(bottleneck, flow[static_cast<size_t>(e)]);
    for (int e : cycle) flow[static_cast<size_t>(e)] -= bottleneck;
    kept = collect();
  }

  CommodityDag dag;
  dag.commodity = k;
  dag.edge_ids = kept;
  dag.kept_flow.reserve(kept.size());
  for (int e : kept) dag.kept_flow.push_back(flow[static_cast<size_t>(e)]);

  // conservation at interior vertices of the subgraph
  const Commodity& c = net.commodities[static_cast<size_t>(k)];
  std::vector<double> balance(static_cast<size_t>(net.vertex_count), 0.0);
  std::vector<char> touched(static_cast<size_t>(net.vertex_count), 0);
  for (size_t i = 0; i < kept.size(); ++i) {
    const Edge& ed = net.edges[static_cast<size_t>(kept[i])];
    balance[static_cast<size_t>(ed.tail)] += dag.kept_flow[i];
    balance[static_cast<size_t>(ed.head)] -= dag.kept_flow[i];
    touched[static_cast<size_t>(ed.tail)] = touched[static_cast<size_t>(ed.head)] = 1;
  }
  for (int v = 0; v < net.vertex_count; ++v) {
    if (!touched[static_cast<size_t>(v)] || v == c.origin || v == c.destination) continue;
    if (std::abs(balance[static_cast<size_t>(v)]) > 1e-6 * demand)
      throw DecompositionError("commodity " + std::to_string(k) +
                               ": flow not conserved at vertex " + std::to_string(v + 1));
  }

  // Kahn topological order over touched vertices
  std::vector<int> indeg(static_cast<size_t>(net.vertex_count), 0);
  std::vector<std::vector<int>> adj(static_cast<size_t>(net.vertex_count));
  for (int e : kept) {
    const Edge& ed = net.edges[static_cast<size_t>(e)];
    ++indeg[static_cast<size_t>(ed.head)];
    adj[static_cast<size_t>(ed.tail)].push_back(ed.head);
  }
  std::vector<int> queue;
  for (int v = 0; v < net.vertex_count; ++v)
    if (touched[static_cast<size_t>(v)] && indeg[static_cast<size_t>(v)] == 0)
      queue.push_back(v);
  size_t qi = 0;
  while (qi < queue.size()) {
    int v = queue[qi++];
    dag.topo_vertices.push_back(v);
    for (int h : adj[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(h)] == 0) queue.push_back(h);
  }
  size_t touched_count = 0;
  for (char t : touched) touched_count += static_cast<size_t>(t);
  if (dag.topo_vertices.size() != touched_count)
    throw std::logic_error("build_commodity_dag: subgraph still cyclic after cancellation");
  return dag;
}

DagPathExtremes dag_path_extremes(const Network& net, const FlowState& fs,
                                  const CommodityDag& dag) {
  const Commodity& c = net.commodities[static_cast<size_t>(dag.commodity)];
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> shortest(static_cast<size_t>(net.vertex_count), inf);
  std::vector<double> neg_shortest(static_cast<size_t>(net.vertex_count), inf);
  shortest[static_cast<size_t>(c.origin)] = 0.0;
  neg_shortest[static_cast<size_t>(c.origin)] = 0.0;

  std::vector<std::vector<int>> incoming(static_cast<size_t>(net.vertex_count));
  for (int e : dag.edge_ids)
    incoming[static_cast<size_t>(net.edges[static_cast<size_t>(e)].head)].push_back(e);

  // one pass in topological order; longest path = shortest under negated weights
  for (int v : dag.topo_vertices) {
    for (int e : incoming[static_cast<size_t>(v)]) {
      const Edge& ed = net.edges[static_cast<size_t>(e)];
      double t = ed.fn.value(fs.edge_flow[static_cast<size_t>(e)]);
      double via_s = shortest[static_cast<size_t>(ed.tail)];
      if (via_s < inf)
        shortest[static_cast<size_t>(v)] = std::min(shortest[static_cast<size_t>(v)], via_s + t);
      double via_n = neg_shortest[static_cast<size_t>(ed.tail)];
      if (via_n < inf)
        neg_shortest[static_cast<size_t>(v)] =
            std::min(neg_shortest[static_cast<size_t>(v)], via_n - t);
    }
  }
  double s = shortest[static_cast<size_t>(c.destination)];
  double n = neg_shortest[static_cast<size_t>(c.destination)];
  if (!(s < inf) || !(n < inf)) {
    if (c.origin == c.destination) return {0.0, 0.0};
    throw DecompositionError("commodity " + std::to_string(dag.commodity) +
                             ": no origin->destination path in its DAG");
  }
  return {s, -n};
}

}  // namespace fairflow
