#include "fairflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fairflow/errors.hpp"
#include "fairflow/shortest_path.hpp"

namespace fairflow {

namespace {

using PathMix = std::map<std::vector<int>, double>;  // deterministic path order

std::vector<double> edge_costs(const Network& net, const std::vector<double>& x,
                               double alpha) {
  std::vector<double> w(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) {
    w[e] = net.edges[e].fn.interpolated_cost(x[e], alpha);
    if (!(w[e] >= 0.0))
      throw InstanceError("negative edge cost encountered; coefficients must be nonnegative");
  }
  return w;
}

struct AonInternal {
  std::vector<double> edge_flow;
  std::vector<std::vector<int>> path;
  double cost = 0.0;
};

AonInternal aon_under_costs(const Network& net, const std::vector<std::vector<int>>& adj,
                            const std::vector<double>& w) {
  AonInternal out;
  out.edge_flow.assign(net.edges.size(), 0.0);
  out.path.resize(net.commodities.size());
  // one tree per distinct origin; commodities are grouped by origin id
  std::vector<size_t> order(net.commodities.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return net.commodities[a].origin < net.commodities[b].origin;
  });
  int cached_origin = -1;
  ShortestPathTree tree;
  for (size_t k : order) {
    const Commodity& c = net.commodities[k];
    if (c.origin != cached_origin) {
      tree = shortest_paths_from(adj, net.edges, w, c.origin, net.vertex_count);
      cached_origin = c.origin;
    }
    try {
      out.path[k] = extract_path(tree, net.edges, c.origin, c.destination);
    } catch (const RoutingError&) {
      throw RoutingError("commodity " + std::to_string(k) + ": no path from " +
                         std::to_string(c.origin + 1) + " to " +
                         std::to_string(c.destination + 1));
    }
    for (int e : out.path[k]) out.edge_flow[static_cast<size_t>(e)] += c.demand;
    out.cost += c.demand * tree.dist[static_cast<size_t>(c.destination)];
  }
  return out;
}

void check_sizes(const Network& net, const std::vector<double>& x, const char* who) {
  if (x.size() != net.edges.size())
    throw std::invalid_argument(std::string(who) + ": flow vector size mismatch");
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0,1]");
}

}  // namespace

Objectives objective_values(const Network& net, const std::vector<double>& edge_flow,
                            double alpha) {
  check_sizes(net, edge_flow, "objective_values");
  check_alpha(alpha);
  Objectives obj;
  for (size_t e = 0; e < net.edges.size(); ++e) {
    double x = edge_flow[e];
    obj.h_so += x * net.edges[e].fn.value(x);
    obj.h_ue += net.edges[e].fn.antiderivative(x);
  }
  obj.h_interp = alpha * obj.h_so + (1.0 - alpha) * obj.h_ue;
  return obj;
}

AonResult all_or_nothing(const Network& net, const std::vector<double>& x, double alpha) {
  check_sizes(net, x, "all_or_nothing");
  check_alpha(alpha);
  auto adj = net.out_edges();
  auto w = edge_costs(net, x, alpha);
  auto got = aon_under_costs(net, adj, w);
  return {std::move(got.edge_flow), std::move(got.path), got.cost};
}

double line_search(const Network& net, const std::vector<double>& x,
                   const std::vector<double>& y, double alpha, double tolerance) {
  check_sizes(net, x, "line_search");
  check_sizes(net, y, "line_search");
  check_alpha(alpha);
  if (!(tolerance > 0.0)) throw std::invalid_argument("line_search: tolerance must be positive");
  auto deriv = [&](double lambda) {
    double g = 0.0;
    for (size_t e = 0; e < net.edges.size(); ++e) {
      double d = y[e] - x[e];
      if (d == 0.0) continue;
      g += d * net.edges[e].fn.interpolated_cost(x[e] + lambda * d, alpha);
    }
    return g;
  };
  if (deriv(0.0) >= 0.0) return 0.0;
  if (deriv(1.0) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    if (deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double relative_gap(const Network& net, const std::vector<double>& x, double alpha) {
  check_sizes(net, x, "relative_gap");
  check_alpha(alpha);
  auto adj = net.out_edges();
  auto w = edge_costs(net, x, alpha);
  double cx = 0.0;
  for (size_t e = 0; e < net.edges.size(); ++e) cx += w[e] * x[e];
  if (cx <= 0.0) return 0.0;
  auto aon = aon_under_costs(net, adj, w);
  return (cx - aon.cost) / cx;
}

namespace {

void validate_config(const SolverConfig& cfg) {
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("solver: max_iterations must be at least 1");
  if (!(cfg.target_relative_gap >= 0.0))
    throw std::invalid_argument("solver: target_relative_gap must be nonnegative");
  if (!(cfg.line_search_tolerance > 0.0))
    throw std::invalid_argument("solver: line_search_tolerance must be positive");
  if (!(cfg.path_record_threshold >= 0.0 && cfg.path_record_threshold < 1.0))
    throw std::invalid_argument("solver: path_record_threshold must lie in [0,1)");
  if (cfg.equilibrate_rounds < 0)
    throw std::invalid_argument("solver: equilibrate_rounds must be nonnegative");
}

// scatter a path mix into per-edge flow
void mix_to_edge_flow(const PathMix& mix, std::vector<double>& flow) {
  std::fill(flow.begin(), flow.end(), 0.0);
  for (const auto& [path, wgt] : mix)
    for (int e : path) flow[static_cast<size_t>(e)] += wgt;
}

// make edge and per-commodity flows exactly the decomposition of fs.paths
void rebuild_from_paths(FlowState& fs) {
  std::fill(fs.edge_flow.begin(), fs.edge_flow.end(), 0.0);
  for (size_t k = 0; k < fs.paths.size(); ++k) {
    auto& xk = fs.commodity_flow[k];
    std::fill(xk.begin(), xk.end(), 0.0);
    for (const auto& p : fs.paths[k])
      for (int e : p.edges) {
        xk[static_cast<size_t>(e)] += p.weight;
        fs.edge_flow[static_cast<size_t>(e)] += p.weight;
      }
  }
}

// Equalize interpolated costs across each commodity's recorded paths by
// shifting flow toward the cheapest one (Newton step on the cost difference,
// clipped at draining the donor). Leaves demand and nonnegativity intact.
void equilibrate_paths(const Network& net, double alpha, int rounds, FlowState& fs) {
  const size_t E = net.edges.size();
  std::vector<int> mark(E, 0);
  auto cost_of = [&](const std::vector<int>& path) {
    double c = 0.0;
    for (int e : path)
      c += net.edges[static_cast<size_t>(e)].fn.interpolated_cost(
          fs.edge_flow[static_cast<size_t>(e)], alpha);
    return c;
  };
  auto slope_at = [&](int e) {
    const Edge& ed = net.edges[static_cast<size_t>(e)];
    double x = fs.edge_flow[static_cast<size_t>(e)];
    return ed.fn.derivative(x) * (1.0 + alpha) + alpha * x * ed.fn.second_derivative(x);
  };
  for (int round = 0; round < rounds; ++round) {
    bool shifted = false;
    for (size_t k = 0; k < fs.paths.size(); ++k) {
      auto& ps = fs.paths[k];
      if (ps.size() < 2) continue;
      size_t imin = 0;
      double cmin = cost_of(ps[0].edges);
      for (size_t i = 1; i < ps.size(); ++i) {
        double c = cost_of(ps[i].edges);
        if (c < cmin) { cmin = c; imin = i; }
      }
      for (size_t i = 0; i < ps.size(); ++i) {
        if (i == imin || ps[i].weight <= 0.0) continue;
        double ci = cost_of(ps[i].edges);
        cmin = cost_of(ps[imin].edges);
        double delta = ci - cmin;
        if (delta <= 1e-14 * (1.0 + std::abs(cmin))) continue;
        for (int e : ps[i].edges) mark[static_cast<size_t>(e)] += 1;
        for (int e : ps[imin].edges) mark[static_cast<size_t>(e)] -= 1;
        double denom = 0.0;
        for (int e : ps[i].edges)
          if (mark[static_cast<size_t>(e)] > 0) denom += slope_at(e);
        for (int e : ps[imin].edges)
          if (mark[static_cast<size_t>(e)] < 0) denom += slope_at(e);
        double shift = denom > 0.0 ? std::min(ps[i].weight, delta / denom) : ps[i].weight;
        for (int e : ps[i].edges)
          if (mark[static_cast<size_t>(e)] > 0) {
            fs.edge_flow[static_cast<size_t>(e)] -= shift;
            fs.commodity_flow[k][static_cast<size_t>(e)] -= shift;
          }
        for (int e : ps[imin].edges)
          if (mark[static_cast<size_t>(e)] < 0) {
            fs.edge_flow[static_cast<size_t>(e)] += shift;
            fs.commodity_flow[k][static_cast<size_t>(e)] += shift;
          }
        for (int e : ps[i].edges) mark[static_cast<size_t>(e)] = 0;
        for (int e : ps[imin].edges) mark[static_cast<size_t>(e)] = 0;
        ps[i].weight -= shift;
        ps[imin].weight += shift;
        shifted = true;
      }
    }
    if (!shifted) break;
  }
}

}  // namespace

FlowState solve(const Network& net, double alpha, const SolverConfig& cfg, SolveTrace* trace) {
  check_alpha(alpha);
  validate_config(cfg);
  const size_t E = net.edges.size();
  const size_t K = net.commodities.size();
  auto adj = net.out_edges();

  FlowState fs;
  fs.alpha = alpha;
  fs.edge_flow.assign(E, 0.0);
  fs.commodity_flow.assign(K, std::vector<double>(E, 0.0));
  fs.paths.resize(K);

  std::vector<PathMix> recorded(K);
  // cold start: all-or-nothing at free flow
  {
    auto w0 = edge_costs(net, fs.edge_flow, alpha);
    auto aon = aon_under_costs(net, adj, w0);
    fs.edge_flow = aon.edge_flow;
    for (size_t k = 0; k < K; ++k) {
      recorded[k][aon.path[k]] = net.commodities[k].demand;
      for (int e : aon.path[k])
        fs.commodity_flow[k][static_cast<size_t>(e)] += net.commodities[k].demand;
    }
  }

  // conjugate state: previous target point as edge flow + path mix
  std::vector<double> prev_target;
  std::vector<PathMix> prev_mix;
  bool have_prev = false;

  std::vector<double> target_flow(E, 0.0);
  std::vector<double> scratch(E, 0.0);
  bool converged = false;
  double gap = 0.0;
  int iterations = 0;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    auto w = edge_costs(net, fs.edge_flow, alpha);
    double cx = 0.0;
    for (size_t e = 0; e < E; ++e) cx += w[e] * fs.edge_flow[e];
    auto aon = aon_under_costs(net, adj, w);
    gap = cx > 0.0 ? (cx - aon.cost) / cx : 0.0;
    if (trace) trace->gap.push_back(gap);
    if (gap <= cfg.target_relative_gap) {
      converged = true;
      break;
    }

    // choose the target point: raw all-or-nothing, or the conjugate mix
    std::vector<PathMix> mix(K);
    bool used_conjugate = false;
    if (cfg.conjugate_direction && have_prev) {
      double num = 0.0, den = 0.0;
      for (size_t e = 0; e < E; ++e) {
        const Edge& ed = net.edges[e];
        double x = fs.edge_flow[e];
        double hess = ed.fn.derivative(x) * (1.0 + alpha) +
                      alpha * x * ed.fn.second_derivative(x);
        double sp = prev_target[e] - x;
        num += hess * sp * (aon.edge_flow[e] - x);
        den += hess * sp * (aon.edge_flow[e] - prev_target[e]);
      }
      double beta = (std::abs(den) > 1e-300) ? num / den : 0.0;
      if (!std::isfinite(beta)) beta = 0.0;
      beta = std::clamp(beta, 0.0, 0.9999);
      if (beta > 0.0) {
        for (size_t e = 0; e < E; ++e)
          target_flow[e] = beta * prev_target[e] + (1.0 - beta) * aon.edge_flow[e];
        // descent guard: fall back to the raw target if the mix points uphill
        double g0 = 0.0;
        for (size_t e = 0; e < E; ++e) g0 += w[e] * (target_flow[e] - fs.edge_flow[e]);
        if (g0 < 0.0) {
          used_conjugate = true;
          for (size_t k = 0; k < K; ++k) {
            for (const auto& [path, wgt] : prev_mix[k]) {
              double v = beta * wgt;
              if (v > 0.0) mix[k][path] += v;
            }
            mix[k][aon.path[k]] += (1.0 - beta) * net.commodities[k].demand;
          }
        }
      }
    }
    if (!used_conjugate) {
      target_flow = aon.edge_flow;
      for (size_t k = 0; k < K; ++k) mix[k][aon.path[k]] = net.commodities[k].demand;
    }

    double lambda = line_search(net, fs.edge_flow, target_flow, alpha,
                                cfg.line_search_tolerance);
    if (lambda <= 0.0) {
      if (used_conjugate) {
        // retry along the raw all-or-nothing target before giving up
        target_flow = aon.edge_flow;
        for (size_t k = 0; k < K; ++k) {
          mix[k].clear();
          mix[k][aon.path[k]] = net.commodities[k].demand;
        }
        lambda = line_search(net, fs.edge_flow, target_flow, alpha,
                             cfg.line_search_tolerance);
      }
      if (lambda <= 0.0) break;  // numerically stuck; gap reported below
    }

    for (size_t e = 0; e < E; ++e)
      fs.edge_flow[e] += lambda * (target_flow[e] - fs.edge_flow[e]);
    for (size_t k = 0; k < K; ++k) {
      mix_to_edge_flow(mix[k], scratch);
      auto& xk = fs.commodity_flow[k];
      for (size_t e = 0; e < E; ++e) xk[e] += lambda * (scratch[e] - xk[e]);
      for (auto& [path, wgt] : recorded[k]) wgt *= 1.0 - lambda;
      for (const auto& [path, wgt] : mix[k]) recorded[k][path] += lambda * wgt;
    }
    iterations = iter;
    if (trace) {
      trace->step.push_back(lambda);
      trace->objective.push_back(objective_values(net, fs.edge_flow, alpha).h_interp);
    }
    prev_target = target_flow;
    prev_mix = std::move(mix);
    have_prev = true;
  }

  fs.iterations = iterations;

  // prune negligible paths, then renormalize the survivors to the demand
  auto prune_recorded = [&](FlowState& state) {
    for (size_t k = 0; k < K; ++k) {
      const double demand = net.commodities[k].demand;
      const double cut = cfg.path_record_threshold * demand;
      double kept = 0.0;
      std::vector<RecordedPath> keep;
      const RecordedPath* best = nullptr;
      for (const auto& p : state.paths[k]) {
        if (!best || p.weight > best->weight) best = &p;
        if (p.weight >= cut && p.weight > 0.0) {
          keep.push_back(p);
          kept += p.weight;
        }
      }
      if (keep.empty() && best) {  // never drop every path of a live commodity
        keep.push_back(*best);
        kept = best->weight;
      }
      if (kept > 0.0) {
        double scale = demand / kept;
        for (auto& p : keep) p.weight *= scale;
      }
      state.paths[k] = std::move(keep);
    }
  };

  for (size_t k = 0; k < K; ++k) {
    fs.paths[k].clear();
    for (const auto& [path, wgt] : recorded[k]) fs.paths[k].push_back({path, wgt});
  }
  prune_recorded(fs);

  if (cfg.equilibrate_rounds > 0 && K > 0) {
    rebuild_from_paths(fs);
    equilibrate_paths(net, alpha, cfg.equilibrate_rounds, fs);
    prune_recorded(fs);
    rebuild_from_paths(fs);
    gap = relative_gap(net, fs.edge_flow, alpha);
  } else if (!converged) {
    gap = relative_gap(net, fs.edge_flow, alpha);
  }
  fs.relative_gap = gap;

  auto obj = objective_values(net, fs.edge_flow, alpha);
  fs.h_so = obj.h_so;
  fs.h_ue = obj.h_ue;
  fs.h_interp = obj.h_interp;
  return fs;
}

}  // namespace fairflow
