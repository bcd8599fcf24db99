#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"
#include "fairflow/oracle.hpp"
#include "fairflow/solver.hpp"
#include "fairflow/tntp.hpp"
#include "helpers.hpp"

using namespace fairflow;

namespace {

Network sioux_falls() {
  const char* env = std::getenv("FAIRFLOW_DATA");
  std::string dir = env ? env : "data";
  return parse_tntp(dir + "/SiouxFalls_net.tntp", dir + "/SiouxFalls_trips.tntp");
}

}  // namespace

TEST_CASE("all-or-nothing loading routes every commodity on a cheapest path") {
  Network net = sioux_falls();
  std::vector<double> zero(net.edges.size(), 0.0);
  double alpha = 0.3;  // irrelevant at zero flow, cost reduces to free-flow time
  AonResult aon = all_or_nothing(net, zero, alpha);
  REQUIRE(aon.path.size() == net.commodities.size());
  REQUIRE(aon.edge_flow.size() == net.edges.size());

  std::vector<double> weight(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) weight[e] = net.edges[e].fn.value(0.0);

  std::vector<double> want_flow(net.edges.size(), 0.0);
  double want_cost = 0.0;
  int cursor_origin = -1;
  std::vector<double> dist;
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    const Commodity& c = net.commodities[k];
    if (c.origin != cursor_origin) {
      dist = test_helpers::bellman_ford(net, weight, c.origin);
      cursor_origin = c.origin;
    }
    // the chosen path must start/end correctly and be exactly shortest
    const auto& path = aon.path[k];
    REQUIRE(!path.empty());
    CHECK(net.edges[static_cast<size_t>(path.front())].tail == c.origin);
    CHECK(net.edges[static_cast<size_t>(path.back())].head == c.destination);
    double len = 0.0;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i > 0)
        CHECK(net.edges[static_cast<size_t>(path[i])].tail ==
              net.edges[static_cast<size_t>(path[i - 1])].head);
      len += weight[static_cast<size_t>(path[i])];
      want_flow[static_cast<size_t>(path[i])] += c.demand;
    }
    CHECK(len == doctest::Approx(dist[static_cast<size_t>(c.destination)]).epsilon(1e-10));
    want_cost += len * c.demand;
  }
  for (size_t e = 0; e < net.edges.size(); ++e)
    CHECK(aon.edge_flow[e] == doctest::Approx(want_flow[e]).epsilon(1e-12));
  CHECK(aon.cost == doctest::Approx(want_cost).epsilon(1e-12));
}

TEST_CASE("line search lands on the analytic minimizer") {
  Network net = build_pigou(1, 0.0, 1.0);  // t1 = 1, t2 = x
  SUBCASE("selfish objective wants the full step") {
    // moving everything from the constant road to the linear one keeps
    // improving until lambda = 1
    double lam = line_search(net, {1.0, 0.0}, {0.0, 1.0}, 0.0);
    CHECK(lam == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("system objective stops halfway") {
    double lam = line_search(net, {0.0, 1.0}, {1.0, 0.0}, 1.0);
    CHECK(lam == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("relative gap is one when all flow takes a road it should not") {
  Network net = build_pigou(1, 0.0, 1.0);
  CHECK(relative_gap(net, {1.0, 0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // at the fixed point the gap vanishes
  CHECK(relative_gap(net, {0.0, 1.0}, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("objective bookkeeping is internally consistent") {
  Network net = build_pigou(4, 1e-3, 1.0);
  for (double alpha : {0.0, 0.3, 1.0}) {
    FlowState fs = solve(net, alpha);
    Objectives again = objective_values(net, fs.edge_flow, alpha);
    CHECK(fs.h_so == doctest::Approx(again.h_so).epsilon(1e-12));
    CHECK(fs.h_ue == doctest::Approx(again.h_ue).epsilon(1e-12));
    CHECK(fs.h_interp ==
          doctest::Approx(alpha * fs.h_so + (1.0 - alpha) * fs.h_ue).epsilon(1e-12));
  }
}

TEST_CASE("solver matches the closed-form reference on the two-edge instance") {
  for (int m : {1, 4}) {
    double eps = (m == 1) ? 1e-3 : 1e-6;
    Network net = build_pigou(m, eps, 1.0);
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      CAPTURE(m);
      CAPTURE(alpha);
      FlowState fs = solve(net, alpha);
      PigouSolution ref = pigou_solve(m, eps, 1.0, alpha);
      CHECK(std::abs(fs.edge_flow[0] - ref.x1) <= 1e-3);
      CHECK(std::abs(fs.edge_flow[1] - ref.x2) <= 1e-3);
    }
  }
}

TEST_CASE("solver matches brute-force grid search on a three-road instance") {
  Network net = build_parallel({TravelTimeFn(std::vector<double>{1.0, 0.5}),
                                TravelTimeFn(std::vector<double>{0.5, 0.0, 1.0}),
                                TravelTimeFn(std::vector<double>{0.0, 2.0})},
                               2.0);
  for (double alpha : {0.0, 0.5, 1.0}) {
    CAPTURE(alpha);
    FlowState fs = solve(net, alpha);
    std::vector<double> ref = grid_search_optimum(net, alpha, 2e-4);
    for (size_t e = 0; e < ref.size(); ++e)
      CHECK(std::abs(fs.edge_flow[e] - ref[e]) <= 1e-3);
  }
}

TEST_CASE("flow state is a consistent demand decomposition") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 40;
  FlowState fs = solve(net, 0.5, cfg);
  REQUIRE(fs.commodity_flow.size() == net.commodities.size());
  REQUIRE(fs.paths.size() == net.commodities.size());

  std::vector<double> sum(net.edges.size(), 0.0);
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    const Commodity& c = net.commodities[k];
    double carried = 0.0;
    for (const auto& p : fs.paths[k]) {
      CHECK(p.weight > 0.0);
      REQUIRE(!p.edges.empty());
      CHECK(net.edges[static_cast<size_t>(p.edges.front())].tail == c.origin);
      CHECK(net.edges[static_cast<size_t>(p.edges.back())].head == c.destination);
      carried += p.weight;
    }
    CHECK(carried == doctest::Approx(c.demand).epsilon(1e-9));
    for (size_t e = 0; e < net.edges.size(); ++e) {
      CHECK(fs.commodity_flow[k][e] >= -1e-12);
      sum[e] += fs.commodity_flow[k][e];
    }
  }
  for (size_t e = 0; e < net.edges.size(); ++e)
    CHECK(std::abs(sum[e] - fs.edge_flow[e]) <= 1e-6 * (1.0 + fs.edge_flow[e]));
}

TEST_CASE("iteration trace descends and the default run hits its gap target") {
  Network net = sioux_falls();
  SolverConfig cfg;  // default 100 iterations, gap 1e-5
  SolveTrace trace;
  FlowState fs = solve(net, 0.0, cfg, &trace);
  REQUIRE(!trace.objective.empty());
  for (size_t i = 1; i < trace.objective.size(); ++i)
    CHECK(trace.objective[i] <= trace.objective[i - 1] * (1.0 + 1e-12));
  CHECK(fs.relative_gap <= cfg.target_relative_gap);

  // without the path-equalizing finish the same budget stalls well short;
  // that contrast is the reason the finishing phase exists
  SolverConfig raw = cfg;
  raw.equilibrate_rounds = 0;
  FlowState coarse = solve(net, 0.0, raw);
  CHECK(coarse.relative_gap > cfg.target_relative_gap);
  CHECK(fs.relative_gap < coarse.relative_gap);
}

TEST_CASE("recorded paths agree on cost at the fixed point") {
  Network net = sioux_falls();
  SolverConfig cfg;
  FlowState fs = solve(net, 0.0, cfg);
  // at the selfish endpoint every used path of a commodity is a shortest path;
  // tolerate spread up to 10x the gap target relative to the best path
  double worst = 0.0;
  for (const auto& paths : fs.paths) {
    double lo = 1e300, hi = 0.0;
    for (const auto& p : paths) {
      double t = test_helpers::path_time(net, p.edges, fs.edge_flow);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    if (!paths.empty()) worst = std::max(worst, (hi - lo) / lo);
  }
  CHECK(worst <= 10.0 * cfg.target_relative_gap);
}

TEST_CASE("objective endpoints move the right way across the blend") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 150;
  cfg.conjugate_direction = true;
  FlowState ue = solve(net, 0.0, cfg);
  FlowState mid = solve(net, 0.5, cfg);
  FlowState so = solve(net, 1.0, cfg);
  // system cost shrinks toward alpha = 1, selfish potential toward alpha = 0
  CHECK(so.h_so <= mid.h_so * (1.0 + 1e-6));
  CHECK(mid.h_so <= ue.h_so * (1.0 + 1e-6));
  CHECK(ue.h_ue <= mid.h_ue * (1.0 + 1e-6));
  CHECK(mid.h_ue <= so.h_ue * (1.0 + 1e-6));
}

TEST_CASE("conjugate and plain directions land on the same flow") {
  Network net = sioux_falls();
  SolverConfig plain;
  plain.max_iterations = 300;
  SolverConfig conj = plain;
  conj.conjugate_direction = true;
  FlowState a = solve(net, 0.5, plain);
  FlowState b = solve(net, 0.5, conj);
  double worst = 0.0;
  for (size_t e = 0; e < a.edge_flow.size(); ++e)
    worst = std::max(worst, std::abs(a.edge_flow[e] - b.edge_flow[e]) /
                                (1.0 + std::abs(a.edge_flow[e])));
  CHECK(worst <= 2e-3);
  CHECK(a.h_so == doctest::Approx(b.h_so).epsilon(1e-5));
}

TEST_CASE("repeat solves are byte-identical") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 25;
  FlowState a = solve(net, 0.7, cfg);
  FlowState b = solve(net, 0.7, cfg);
  CHECK(flow_state_to_json(net, a) == flow_state_to_json(net, b));
}

TEST_CASE("invalid arguments are rejected up front") {
  Network net = build_pigou(1, 0.0, 1.0);
  CHECK_THROWS_AS((void)solve(net, -0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)solve(net, 1.1), std::invalid_argument);
  SolverConfig cfg;
  cfg.max_iterations = 0;
  CHECK_THROWS_AS((void)solve(net, 0.5, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.equilibrate_rounds = -1;
  CHECK_THROWS_AS((void)solve(net, 0.5, cfg), std::invalid_argument);
}
