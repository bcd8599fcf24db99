#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairflow/dag.hpp"
#include "fairflow/errors.hpp"
#include "fairflow/fairness.hpp"
#include "fairflow/network.hpp"
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

// Unit-time diamond with an internal 2-cycle between the middle vertices:
// two recorded paths whose union is cyclic even though each path is simple.
Network diamond() {
  Network net;
  net.vertex_count = 4;
  TravelTimeFn unit(std::vector<double>{1.0});
  net.edges.push_back({0, 1, unit, 0.0});  // e0
  net.edges.push_back({1, 2, unit, 0.0});  // e1
  net.edges.push_back({2, 3, unit, 0.0});  // e2
  net.edges.push_back({0, 2, unit, 0.0});  // e3
  net.edges.push_back({2, 1, unit, 0.0});  // e4
  net.edges.push_back({1, 3, unit, 0.0});  // e5
  net.commodities.push_back({0, 3, 1.0, 1.0});
  return net;
}

FlowState diamond_state() {
  FlowState fs;
  fs.alpha = 0.0;
  fs.paths.resize(1);
  fs.paths[0].push_back({{0, 1, 2}, 0.6});
  fs.paths[0].push_back({{3, 4, 5}, 0.4});
  fs.edge_flow = {0.6, 0.6, 0.6, 0.4, 0.4, 0.4};
  fs.commodity_flow = {fs.edge_flow};
  return fs;
}

}  // namespace

TEST_CASE("used-path subgraph cancels opposing flow between recorded paths") {
  Network net = diamond();
  FlowState fs = diamond_state();
  CommodityDag dag = build_commodity_dag(net, fs, 0);
  // the 1->2 / 2->1 pair overlaps by 0.4; the smaller direction disappears
  CHECK(dag.edge_ids == std::vector<int>{0, 1, 2, 3, 5});
  REQUIRE(dag.kept_flow.size() == 5);
  CHECK(dag.kept_flow[0] == doctest::Approx(0.6));
  CHECK(dag.kept_flow[1] == doctest::Approx(0.2));
  CHECK(dag.kept_flow[2] == doctest::Approx(0.6));
  CHECK(dag.kept_flow[3] == doctest::Approx(0.4));
  CHECK(dag.kept_flow[4] == doctest::Approx(0.4));
  CHECK(dag.topo_vertices.size() == 4);

  DagPathExtremes ex = dag_path_extremes(net, fs, dag);
  CHECK(ex.shortest == doctest::Approx(2.0));
  CHECK(ex.longest == doctest::Approx(3.0));

  MetricReport u = unfairness_u(net, fs);
  CHECK(u.aggregate == doctest::Approx(1.5));
  // both recorded paths take 3 units, so there is nothing to envy
  CHECK(envy_free_unfairness(net, fs).aggregate == doctest::Approx(1.0));
  CHECK(used_nash_unfairness(net, fs).aggregate == doctest::Approx(1.5));
  CHECK(gini_coefficient(net, fs).aggregate == doctest::Approx(0.0));
}

TEST_CASE("subgraph extremes match exhaustive path enumeration") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 60;
  FlowState fs = solve(net, 0.4, cfg);
  // spot-check a spread of commodities against brute force on the kept edges
  for (size_t k = 0; k < net.commodities.size(); k += 37) {
    CAPTURE(k);
    CommodityDag dag = build_commodity_dag(net, fs, static_cast<int>(k));
    DagPathExtremes ex = dag_path_extremes(net, fs, dag);

    Network sub;  // kept edges only, same vertex ids
    sub.vertex_count = net.vertex_count;
    for (int e : dag.edge_ids) sub.edges.push_back(net.edges[static_cast<size_t>(e)]);
    const Commodity& c = net.commodities[k];
    auto paths = test_helpers::enumerate_paths(sub, c.origin, c.destination, 200000);
    REQUIRE(!paths.empty());
    double lo = 1e300, hi = 0.0;
    for (const auto& p : paths) {
      double t = 0.0;
      for (int se : p) {
        int orig = dag.edge_ids[static_cast<size_t>(se)];
        t += net.edges[static_cast<size_t>(orig)].fn.value(
            fs.edge_flow[static_cast<size_t>(orig)]);
      }
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(ex.shortest == doctest::Approx(lo).epsilon(1e-9));
    CHECK(ex.longest == doctest::Approx(hi).epsilon(1e-9));
  }
}

TEST_CASE("two-edge instance fairness at the endpoints") {
  Network net = build_pigou(1, 1e-9, 1.0);
  SUBCASE("selfish flow is perfectly fair") {
    FlowState fs = solve(net, 0.0);
    CHECK(unfairness_u(net, fs).aggregate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(envy_free_unfairness(net, fs).aggregate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(used_nash_unfairness(net, fs).aggregate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gini_coefficient(net, fs).aggregate == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("system-optimal flow doubles the slower travellers' time") {
    FlowState fs = solve(net, 1.0);
    CHECK(unfairness_u(net, fs).aggregate == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(envy_free_unfairness(net, fs).aggregate == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(used_nash_unfairness(net, fs).aggregate == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(gini_coefficient(net, fs).aggregate ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-4));
  }
}

TEST_CASE("metric ordering holds commodity by commodity") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 40;
  FlowState fs = solve(net, 0.3, cfg);
  MetricReport envy = envy_free_unfairness(net, fs);
  MetricReport nash = used_nash_unfairness(net, fs);
  MetricReport u = unfairness_u(net, fs);
  REQUIRE(envy.per_commodity.size() == u.per_commodity.size());
  for (size_t k = 0; k < u.per_commodity.size(); ++k) {
    if (std::isnan(u.per_commodity[k])) continue;
    CHECK(envy.per_commodity[k] <= nash.per_commodity[k] + 1e-9);
    CHECK(nash.per_commodity[k] <= u.per_commodity[k] + 1e-9);
  }
  CHECK(envy.aggregate <= nash.aggregate + 1e-9);
  CHECK(nash.aggregate <= u.aggregate + 1e-9);
}

TEST_CASE("metrics only see time ratios, not units") {
  Network net = diamond();
  FlowState fs = diamond_state();
  Network scaled = net;
  for (auto& e : scaled.edges) {
    std::vector<double> coef = e.fn.coefficients();
    for (double& c : coef) c *= 3.0;
    e.fn = TravelTimeFn(coef);
  }
  CHECK(unfairness_u(scaled, fs).aggregate ==
        doctest::Approx(unfairness_u(net, fs).aggregate).epsilon(1e-12));
  CHECK(envy_free_unfairness(scaled, fs).aggregate ==
        doctest::Approx(envy_free_unfairness(net, fs).aggregate).epsilon(1e-12));
  CHECK(used_nash_unfairness(scaled, fs).aggregate ==
        doctest::Approx(used_nash_unfairness(net, fs).aggregate).epsilon(1e-12));
  CHECK(gini_coefficient(scaled, fs).aggregate ==
        doctest::Approx(gini_coefficient(net, fs).aggregate).epsilon(1e-12));
}

TEST_CASE("zero-time commodities are excluded, not divided by") {
  Network net = build_parallel({TravelTimeFn(std::vector<double>{0.0})}, 1.0);
  FlowState fs;
  fs.edge_flow = {1.0};
  fs.commodity_flow = {{1.0}};
  fs.paths.resize(1);
  fs.paths[0].push_back({{0}, 1.0});

  MetricReport u = unfairness_u(net, fs);
  REQUIRE(u.per_commodity.size() == 1);
  CHECK(std::isnan(u.per_commodity[0]));
  CHECK(u.excluded == std::vector<int>{0});
  CHECK(u.aggregate == doctest::Approx(1.0));  // neutral for a ratio
  CHECK(gini_coefficient(net, fs).aggregate == doctest::Approx(0.0));
}

TEST_CASE("a commodity with no usable paths is a reportable defect") {
  Network net = diamond();
  FlowState fs = diamond_state();
  fs.paths[0].clear();
  CHECK_THROWS_AS((void)unfairness_u(net, fs), DecompositionError);
  CHECK_THROWS_AS((void)envy_free_unfairness(net, fs), DecompositionError);
  CHECK_THROWS_AS((void)used_nash_unfairness(net, fs), DecompositionError);
  CHECK_THROWS_AS((void)gini_coefficient(net, fs), DecompositionError);
}

TEST_CASE("mean aggregation averages the included commodities") {
  Network net = sioux_falls();
  SolverConfig cfg;
  cfg.max_iterations = 30;
  FlowState fs = solve(net, 0.6, cfg);
  MetricReport mx = unfairness_u(net, fs, Aggregate::kMax);
  MetricReport mean = unfairness_u(net, fs, Aggregate::kMean);
  double acc = 0.0;
  size_t n = 0;
  double worst = 0.0;
  for (double v : mx.per_commodity) {
    if (std::isnan(v)) continue;
    acc += v;
    worst = std::max(worst, v);
    ++n;
  }
  REQUIRE(n > 0);
  CHECK(mean.aggregate == doctest::Approx(acc / static_cast<double>(n)).epsilon(1e-12));
  CHECK(mx.aggregate == doctest::Approx(worst).epsilon(1e-12));
  CHECK(mean.aggregate <= mx.aggregate + 1e-12);
}

TEST_CASE("metric serialization carries per-commodity rows and aggregates") {
  Network net = diamond();
  FlowState fs = diamond_state();
  std::vector<MetricReport> reports{unfairness_u(net, fs), gini_coefficient(net, fs)};
  std::string csv = metrics_to_csv(reports);
  CHECK(csv.rfind("metric,commodity,value\n", 0) == 0);
  CHECK(csv.find("u,0,1.5\n") != std::string::npos);
  CHECK(csv.find("u,aggregate,1.5\n") != std::string::npos);
  CHECK(csv.find("gini,aggregate,0\n") != std::string::npos);
  std::string json = metrics_to_json(reports);
  CHECK(json.find("\"metric\": \"u\"") != std::string::npos);
  CHECK(json.find("\"aggregate\": 1.5") != std::string::npos);
}
