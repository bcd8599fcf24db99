#include "fairflow/network.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace fairflow {

int Network::max_degree() const {
  int m = 0;
  for (const auto& e : edges) m = std::max(m, e.fn.degree());
  return m;
}

double Network::total_demand() const {
  double d = 0.0;
  for (const auto& k : commodities) d += k.demand;
  return d;
}

std::vector<std::vector<int>> Network::out_edges() const {
  std::vector<std::vector<int>> adj(static_cast<size_t>(vertex_count));
  for (size_t e = 0; e < edges.size(); ++e)
    adj[static_cast<size_t>(edges[e].tail)].push_back(static_cast<int>(e));
  return adj;
}

namespace {

std::string describe_edge(const Network& net, size_t e) {
  std::ostringstream os;
  os << "edge " << e << " (" << net.edges[e].tail + 1 << "->" << net.edges[e].head + 1 << ")";
  return os.str();
}

}  // namespace

std::vector<Diagnostic> validate(const Network& net) {
  std::vector<Diagnostic> out;
  auto add = [&out](const std::string& code, const std::string& message) {
    out.push_back({code, message});
  };

  for (size_t e = 0; e < net.edges.size(); ++e) {
    const Edge& ed = net.edges[e];
    if (ed.tail < 0 || ed.tail >= net.vertex_count || ed.head < 0 ||
        ed.head >= net.vertex_count) {
      add("vertex-out-of-range", describe_edge(net, e) + " references a missing vertex");
      continue;
    }
    if (ed.tail == ed.head) add("self-loop", describe_edge(net, e) + " is a self-loop");
    for (double c : ed.fn.coefficients())
      if (c < 0.0) {
        add("negative-coefficient",
            describe_edge(net, e) + " has a negative travel time coefficient");
        break;
      }
  }

  // one BFS per distinct origin; |V| and |E| are small at desk scale
  std::vector<std::vector<int>> adj;
  bool adj_built = false;
  std::vector<char> reach;
  int cached_origin = -1;
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    const Commodity& c = net.commodities[k];
    std::ostringstream who;
    who << "commodity " << k << " (" << c.origin + 1 << "->" << c.destination + 1 << ")";
    if (c.origin < 0 || c.origin >= net.vertex_count || c.destination < 0 ||
        c.destination >= net.vertex_count) {
      add("commodity-vertex-out-of-range", who.str() + " references a missing vertex");
      continue;
    }
    if (c.demand <= 0.0) add("nonpositive-demand", who.str() + " has nonpositive demand");
    if (c.value_of_time <= 0.0)
      add("nonpositive-value-of-time", who.str() + " has nonpositive value of time");
    if (!adj_built) {
      // skip edges already reported out of range so the walk stays in bounds
      adj.assign(static_cast<size_t>(net.vertex_count), {});
      for (size_t e = 0; e < net.edges.size(); ++e) {
        const Edge& ed = net.edges[e];
        if (ed.tail < 0 || ed.tail >= net.vertex_count || ed.head < 0 ||
            ed.head >= net.vertex_count)
          continue;
        adj[static_cast<size_t>(ed.tail)].push_back(static_cast<int>(e));
      }
      adj_built = true;
    }
    if (c.origin != cached_origin) {
      reach.assign(static_cast<size_t>(net.vertex_count), 0);
      std::queue<int> q;
      q.push(c.origin);
      reach[static_cast<size_t>(c.origin)] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : adj[static_cast<size_t>(v)]) {
          int h = net.edges[static_cast<size_t>(e)].head;
          if (!reach[static_cast<size_t>(h)]) {
            reach[static_cast<size_t>(h)] = 1;
            q.push(h);
          }
        }
      }
      cached_origin = c.origin;
    }
    if (!reach[static_cast<size_t>(c.destination)])
      add("unreachable-destination", who.str() + " has no connecting path");
  }
  return out;
}

Network build_pigou(int m, double eps, double demand) {
  Network net;
  net.vertex_count = 2;
  std::vector<double> slow{1.0, eps};
  std::vector<double> fast(static_cast<size_t>(m) + 1, 0.0);
  fast[static_cast<size_t>(m)] = 1.0;
  net.edges.push_back({0, 1, TravelTimeFn(std::move(slow)), 0.0});
  net.edges.push_back({0, 1, TravelTimeFn(std::move(fast)), 0.0});
  net.commodities.push_back({0, 1, demand, 1.0});
  return net;
}

Network build_parallel(std::vector<TravelTimeFn> fns, double demand) {
  Network net;
  net.vertex_count = 2;
  for (auto& fn : fns) net.edges.push_back({0, 1, std::move(fn), 0.0});
  net.commodities.push_back({0, 1, demand, 1.0});
  return net;
}

}  // namespace fairflow
