#include "fairflow/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fairflow/csvio.hpp"
#include "fairflow/errors.hpp"
#include "fairflow/shortest_path.hpp"

#include "json.hpp"

namespace fairflow {

TollVector marginal_tolls(const Network& net, const FlowState& fs) {
  TollVector out;
  out.provenance = "marginal_cost";
  out.alpha = fs.alpha;
  out.toll.resize(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) {
    double x = fs.edge_flow[e];
    out.toll[e] = std::max(0.0, fs.alpha * x * net.edges[e].fn.derivative(x));
  }
  return out;
}

EnforcementCheck verify_enforcement(const Network& net, const FlowState& fs,
                                    const TollVector& tolls, const SolverConfig& cfg) {
  if (net.edges.size() != tolls.toll.size())
    throw std::invalid_argument("verify_enforcement: toll/edge count mismatch");
  double vot = net.commodities.empty() ? 1.0 : net.commodities[0].value_of_time;
  for (const auto& c : net.commodities)
    if (std::abs(c.value_of_time - vot) > 1e-12 * (1.0 + std::abs(vot)))
      throw std::invalid_argument(
          "verify_enforcement: requires homogeneous values of time");

  // A constant money toll is a constant extra time cost of toll/vot, so the
  // tolled network stays polynomial and can be re-solved directly.
  Network tolled = net;
  for (size_t e = 0; e < tolled.edges.size(); ++e) {
    if (tolls.toll[e] == 0.0) continue;
    auto coefs = tolled.edges[e].fn.coefficients();
    coefs[0] += tolls.toll[e] / vot;
    tolled.edges[e].fn = TravelTimeFn(std::move(coefs));
    tolled.edges[e].has_bpr = false;  // the polynomial no longer matches the row
  }

  EnforcementCheck chk;
  chk.resolved = solve(tolled, 0.0, cfg);

  for (size_t e = 0; e < net.edges.size(); ++e) {
    double dev = std::abs(chk.resolved.edge_flow[e] - fs.edge_flow[e]) /
                 (1.0 + std::abs(fs.edge_flow[e]));
    chk.max_flow_deviation = std::max(chk.max_flow_deviation, dev);
  }

  // Recorded paths of the original state must have equalized tolled costs.
  for (size_t k = 0; k < fs.paths.size(); ++k) {
    if (fs.paths[k].empty()) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& p : fs.paths[k]) {
      double c = 0.0;
      for (int e : p.edges)
        c += vot * net.edges[static_cast<size_t>(e)].fn.value(
                 fs.edge_flow[static_cast<size_t>(e)]) +
             tolls.toll[static_cast<size_t>(e)];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    if (lo > 0.0)
      chk.max_cost_spread = std::max(chk.max_cost_spread, (hi - lo) / lo);
  }
  chk.enforced = chk.max_flow_deviation <= 1e-3 && chk.max_cost_spread <= 1e-3;
  return chk;
}

RestrictedLp heterogeneous_lp(const Network& net, const FlowState& fs,
                              const std::vector<UserClass>& classes_in) {
  RestrictedLp lp;
  lp.net = &net;
  lp.alpha = fs.alpha;
  lp.classes = classes_in;
  if (lp.classes.empty()) {
    for (size_t k = 0; k < net.commodities.size(); ++k)
      lp.classes.push_back({static_cast<int>(k), net.commodities[k].value_of_time, 1.0});
  }

  std::vector<double> share_sum(net.commodities.size(), 0.0);
  for (const auto& c : lp.classes) {
    if (c.commodity < 0 || c.commodity >= static_cast<int>(net.commodities.size()))
      throw DecompositionError("heterogeneous_lp: class commodity out of range");
    if (!(c.share > 0.0) || !(c.value_of_time > 0.0))
      throw DecompositionError("heterogeneous_lp: shares and values of time must be positive");
    share_sum[static_cast<size_t>(c.commodity)] += c.share;
  }
  for (size_t k = 0; k < share_sum.size(); ++k)
    if (share_sum[k] != 0.0 && std::abs(share_sum[k] - 1.0) > 1e-9)
      throw DecompositionError("heterogeneous_lp: class shares must sum to 1 per commodity");
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    if (share_sum[k] == 0.0)
      throw DecompositionError("heterogeneous_lp: commodity without a user class");
    if (fs.paths.size() <= k || fs.paths[k].empty())
      throw DecompositionError("heterogeneous_lp: commodity " + std::to_string(k + 1) +
                               " has no recorded paths");
  }

  // Capacities come from the flows the recorded paths induce, so the LP is
  // feasible by construction at the recorded split.
  std::vector<double> induced(net.edges.size(), 0.0);
  for (size_t k = 0; k < fs.paths.size(); ++k)
    for (const auto& p : fs.paths[k])
      for (int e : p.edges) induced[static_cast<size_t>(e)] += p.weight;

  std::vector<int> cap_row_of_edge(net.edges.size(), -1);
  for (size_t e = 0; e < net.edges.size(); ++e) {
    if (induced[e] > 0.0) {
      cap_row_of_edge[e] = static_cast<int>(lp.capacity_edges.size());
      lp.capacity_edges.push_back(static_cast<int>(e));
      lp.capacity.push_back(induced[e]);
    }
  }

  const int demand_rows = static_cast<int>(lp.classes.size());
  const int cap_rows = static_cast<int>(lp.capacity_edges.size());
  lp.problem.rows = demand_rows + cap_rows;
  lp.problem.rhs.resize(static_cast<size_t>(lp.problem.rows));
  for (int c = 0; c < demand_rows; ++c) {
    const auto& cls = lp.classes[static_cast<size_t>(c)];
    lp.problem.rhs[static_cast<size_t>(c)] =
        cls.share * net.commodities[static_cast<size_t>(cls.commodity)].demand;
  }
  for (int r = 0; r < cap_rows; ++r)
    lp.problem.rhs[static_cast<size_t>(demand_rows + r)] = lp.capacity[static_cast<size_t>(r)];

  // The column set starts with the recorded paths and grows by pricing: the
  // enforceable-flow condition is stated over all paths of the network, and
  // with only the recorded ones the dual can land on a degenerate vertex
  // whose tolls let an unrecorded path undercut the equilibrium. Each round
  // adds, per class, the most undercutting path until none remains, at which
  // point the duals price out every path and the tolls certify globally.
  struct PathColumn {
    int cls = 0;
    std::vector<int> edges;
    double time = 0.0;
    double start = 0.0;  // recorded weight scaled by class share
  };
  std::vector<PathColumn> cols;
  std::vector<int> heaviest(static_cast<size_t>(demand_rows), -1);
  std::set<std::pair<int, std::vector<int>>> known;
  for (int c = 0; c < demand_rows; ++c) {
    const auto& cls = lp.classes[static_cast<size_t>(c)];
    double top = -1.0;
    for (const auto& p : fs.paths[static_cast<size_t>(cls.commodity)]) {
      double time = 0.0;
      for (int e : p.edges)
        time += net.edges[static_cast<size_t>(e)].fn.value(fs.edge_flow[static_cast<size_t>(e)]);
      if (p.weight > top) {
        top = p.weight;
        heaviest[static_cast<size_t>(c)] = static_cast<int>(cols.size());
      }
      cols.push_back({c, p.edges, time, cls.share * p.weight});
      known.insert({c, p.edges});
    }
  }

  auto assemble = [&] {
    lp.problem.columns.clear();
    lp.problem.cost.clear();
    lp.column_class.clear();
    lp.column_path.clear();
    lp.column_time.clear();
    for (const auto& pc : cols) {
      std::vector<std::pair<int, double>> col;
      col.emplace_back(pc.cls, 1.0);
      for (int e : pc.edges)
        col.emplace_back(demand_rows + cap_row_of_edge[static_cast<size_t>(e)], 1.0);
      lp.column_class.push_back(pc.cls);
      lp.column_path.push_back(pc.edges);
      lp.column_time.push_back(pc.time);
      lp.problem.columns.push_back(std::move(col));
      lp.problem.cost.push_back(lp.classes[static_cast<size_t>(pc.cls)].value_of_time * pc.time);
    }
    // Slack columns turn the capacity rows into equalities.
    for (int r = 0; r < cap_rows; ++r) {
      lp.problem.columns.push_back({{demand_rows + r, 1.0}});
      lp.problem.cost.push_back(0.0);
    }
  };

  // The recorded split scaled by class share is a feasible point, and its
  // heaviest path per class plus the slacks form a nonsingular basis, so the
  // simplex starts warm; the artificial phase stalls badly on these
  // degenerate rows. Later rounds restart from the previous optimal basis.
  const auto adj = net.out_edges();
  constexpr int kMaxPricingRounds = 64;
  int prev_paths = 0;
  for (int round = 0;; ++round) {
    const int path_count = static_cast<int>(cols.size());
    assemble();
    SimplexWarmStart warm;
    warm.x.assign(cols.size() + static_cast<size_t>(cap_rows), 0.0);
    bool from_previous = round > 0;
    if (from_previous) {
      for (int i = 0; i < prev_paths; ++i) warm.x[static_cast<size_t>(i)] = lp.solution.x[static_cast<size_t>(i)];
      for (int r = 0; r < cap_rows; ++r)
        warm.x[static_cast<size_t>(path_count + r)] =
            lp.solution.x[static_cast<size_t>(prev_paths + r)];
      for (int i : lp.solution.basis) {
        if (i < 0) { from_previous = false; break; }
        warm.basis_columns.push_back(i < prev_paths ? i : path_count + (i - prev_paths));
      }
    }
    if (!from_previous) {
      warm.basis_columns = heaviest;
      for (int r = 0; r < cap_rows; ++r) warm.basis_columns.push_back(path_count + r);
      for (size_t i = 0; i < cols.size(); ++i) warm.x[i] = cols[i].start;
      for (int r = 0; r < cap_rows; ++r) warm.x[static_cast<size_t>(path_count + r)] = 0.0;
    }

    lp.solution = solve_simplex(lp.problem, warm);
    if (!lp.solution.feasible)
      throw RestrictionError(
          "heterogeneous_lp: restricted problem infeasible; re-solve with a smaller "
          "path pruning threshold");
    prev_paths = path_count;
    if (round >= kMaxPricingRounds) break;

    bool added = false;
    std::vector<double> w(net.edges.size());
    for (int c = 0; c < demand_rows; ++c) {
      const auto& cls = lp.classes[static_cast<size_t>(c)];
      const auto& com = net.commodities[static_cast<size_t>(cls.commodity)];
      for (size_t e = 0; e < net.edges.size(); ++e) {
        if (cap_row_of_edge[e] < 0) {
          // No recorded flow means capacity zero: the path could never carry
          // flow, so it cannot enter the column set.
          w[e] = std::numeric_limits<double>::infinity();
          continue;
        }
        double tau = std::max(
            0.0, -lp.solution.dual[static_cast<size_t>(demand_rows + cap_row_of_edge[e])]);
        w[e] = cls.value_of_time * net.edges[e].fn.value(fs.edge_flow[e]) + tau;
      }
      auto sp = shortest_paths_from(adj, net.edges, w, com.origin, net.vertex_count);
      double mu = lp.solution.dual[static_cast<size_t>(c)];
      double shortest = sp.dist[static_cast<size_t>(com.destination)];
      if (!(shortest < mu - 1e-7 * (1.0 + std::abs(mu)))) continue;
      std::vector<int> pe = extract_path(sp, net.edges, com.origin, com.destination);
      if (!known.insert({c, pe}).second) continue;
      double time = 0.0;
      for (int e : pe) time += net.edges[static_cast<size_t>(e)].fn.value(fs.edge_flow[static_cast<size_t>(e)]);
      cols.push_back({c, std::move(pe), time, 0.0});
      added = true;
    }
    if (!added) break;
  }
  return lp;
}

TightnessReport check_tightness(const RestrictedLp& lp) {
  TightnessReport rep;
  const int demand_rows = static_cast<int>(lp.classes.size());
  const int path_cols = static_cast<int>(lp.column_class.size());
  rep.slack.resize(lp.capacity.size());
  rep.tight = true;
  for (size_t r = 0; r < lp.capacity.size(); ++r) {
    // Slack column value is the leftover capacity on that row.
    double s = lp.solution.x[static_cast<size_t>(path_cols) + r];
    rep.slack[r] = s;
    rep.max_slack = std::max(rep.max_slack, s);
    if (s > 1e-6 * (1.0 + lp.capacity[r])) rep.tight = false;
  }
  (void)demand_rows;
  return rep;
}

TollVector dual_tolls(const RestrictedLp& lp) {
  TightnessReport rep = check_tightness(lp);
  if (!rep.tight)
    throw EnforceabilityError(
        "dual_tolls: a capacity constraint is slack at the optimum, so no toll "
        "vector can enforce the target flow");
  const int demand_rows = static_cast<int>(lp.classes.size());
  TollVector out;
  out.provenance = "lp_dual";
  out.alpha = lp.alpha;
  out.toll.assign(lp.net->edges.size(), 0.0);
  for (size_t r = 0; r < lp.capacity_edges.size(); ++r) {
    double tau = -lp.solution.dual[static_cast<size_t>(demand_rows) + r];
    if (tau < -1e-9)
      throw EnforceabilityError("dual_tolls: capacity dual has the wrong sign");
    out.toll[static_cast<size_t>(lp.capacity_edges[r])] = std::max(0.0, tau);
  }
  if (lp.capacity_edges.size() < lp.net->edges.size()) {
    // Edges carrying no recorded flow have zero capacity in the enforcement
    // condition; price them above every class potential so the published
    // tolls cannot attract flow onto them.
    double top = 0.0;
    for (int c = 0; c < demand_rows; ++c)
      top = std::max(top, lp.solution.dual[static_cast<size_t>(c)]);
    std::vector<char> has_row(lp.net->edges.size(), 0);
    for (int e : lp.capacity_edges) has_row[static_cast<size_t>(e)] = 1;
    for (size_t e = 0; e < lp.net->edges.size(); ++e)
      if (!has_row[e]) out.toll[e] = top;
  }
  return out;
}

SoundnessReport enforcement_soundness(const Network& net, const FlowState& fs,
                                      const RestrictedLp& lp, const TollVector& tolls) {
  SoundnessReport rep;
  rep.worst_slack = std::numeric_limits<double>::infinity();

  auto adj = net.out_edges();
  const int demand_rows = static_cast<int>(lp.classes.size());
  for (int c = 0; c < demand_rows; ++c) {
    const auto& cls = lp.classes[static_cast<size_t>(c)];
    const auto& com = net.commodities[static_cast<size_t>(cls.commodity)];
    std::vector<double> w(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); ++e)
      w[e] = cls.value_of_time * net.edges[e].fn.value(fs.edge_flow[e]) + tolls.toll[e];
    auto sp = shortest_paths_from(adj, net.edges, w, com.origin, net.vertex_count);
    double shortest = sp.dist[static_cast<size_t>(com.destination)];

    double best_recorded = std::numeric_limits<double>::infinity();
    for (size_t col = 0; col < lp.column_class.size(); ++col) {
      if (lp.column_class[col] != c) continue;
      double cost = 0.0;
      for (int e : lp.column_path[col]) cost += w[static_cast<size_t>(e)];
      best_recorded = std::min(best_recorded, cost);
    }
    double denom = std::max(1.0, std::abs(best_recorded));
    rep.worst_slack = std::min(rep.worst_slack, (shortest - best_recorded) / denom);
  }
  if (demand_rows == 0) rep.worst_slack = 0.0;
  // Shortest paths can only be cheaper up to round-off if the tolls are sound.
  rep.sound = rep.worst_slack >= -1e-6;
  return rep;
}

std::string tolls_to_csv(const TollVector& tolls) {
  std::ostringstream os;
  os << "edge_id,toll,provenance,alpha\n";
  for (size_t e = 0; e < tolls.toll.size(); ++e)
    os << e << ',' << fmt12(tolls.toll[e]) << ',' << tolls.provenance << ','
       << fmt12(tolls.alpha) << '\n';
  return os.str();
}

std::vector<UserClass> classes_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("classes_from_json: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("classes_from_json: expected a top-level array");
  std::vector<UserClass> out;
  try {
    for (const auto& item : j) {
      UserClass c;
      c.commodity = item.at("commodity").get<int>();
      c.value_of_time = item.at("value_of_time").get<double>();
      c.share = item.value("share", 1.0);
      out.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("classes_from_json: ") + e.what());
  }
  return out;
}

}  // namespace fairflow
