#pragma once

#include <string>
#include <vector>

#include "fairflow/travel_time.hpp"

namespace fairflow {

struct Edge {
  int tail = 0;
  int head = 0;
  TravelTimeFn fn;
  double normal_length = 0.0;  // physical length column; carried, not used in costs

  // Original BPR row, kept so a parsed network can be written back out.
  bool has_bpr = false;
  double bpr_capacity = 0.0;
  double bpr_fftime = 0.0;
  double bpr_b = 0.0;
  int bpr_power = 0;
};

struct Commodity {
  int origin = 0;
  int destination = 0;
  double demand = 0.0;
  double value_of_time = 1.0;
};

struct Network {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<Commodity> commodities;

  // max polynomial degree over edges; the degree bound in the fairness guarantee
  int max_degree() const;
  double total_demand() const;
  // adjacency as outgoing edge ids per vertex, in edge-id order
  std::vector<std::vector<int>> out_edges() const;
};

struct Diagnostic {
  std::string code;     // stable identifier, e.g. "negative-coefficient"
  std::string message;  // human-readable, names the offending entity
};

// Structural checks: vertex bounds, positive demand and value of time,
// nonnegative coefficients, reachability per commodity. Self-loops are legal
// but flagged. Empty result means the network is clean.
std::vector<Diagnostic> validate(const Network& net);

// Two parallel edges, one unit commodity: t1(x) = 1 + eps*x, t2(x) = x^m.
// The canonical worst-case instance for fairness/efficiency trade-offs.
Network build_pigou(int m, double eps, double demand);

// Parallel single-commodity network from explicit edge functions (tests).
Network build_parallel(std::vector<TravelTimeFn> fns, double demand);

}  // namespace fairflow
