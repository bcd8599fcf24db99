#include "fairflow/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairflow/csvio.hpp"
#include "fairflow/dag.hpp"
#include "fairflow/errors.hpp"
#include "json.hpp"

namespace fairflow {

namespace {

constexpr double kDegenerate = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double path_time(const Network& net, const FlowState& fs, const std::vector<int>& path) {
  double t = 0.0;
  for (int e : path)
    t += net.edges[static_cast<size_t>(e)].fn.value(fs.edge_flow[static_cast<size_t>(e)]);
  return t;
}

MetricReport finish(MetricReport r, Aggregate agg, double neutral) {
  double acc = 0.0;
  size_t n = 0;
  for (double v : r.per_commodity) {
    if (std::isnan(v)) continue;
    if (agg == Aggregate::kMax)
      acc = (n == 0) ? v : std::max(acc, v);
    else
      acc += v;
    ++n;
  }
  if (n == 0)
    r.aggregate = neutral;
  else
    r.aggregate = (agg == Aggregate::kMax) ? acc : acc / static_cast<double>(n);
  return r;
}

void check_state(const Network& net, const FlowState& fs) {
  if (fs.commodity_flow.size() != net.commodities.size() ||
      fs.paths.size() != net.commodities.size() || fs.edge_flow.size() != net.edges.size())
    throw std::invalid_argument("fairness: flow state does not match network");
}

}  // namespace

MetricReport unfairness_u(const Network& net, const FlowState& fs, Aggregate agg) {
  check_state(net, fs);
  MetricReport r;
  r.metric = "u";
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    CommodityDag dag = build_commodity_dag(net, fs, static_cast<int>(k));
    DagPathExtremes ex = dag_path_extremes(net, fs, dag);
    if (ex.shortest <= kDegenerate) {
      r.per_commodity.push_back(kNaN);
      r.excluded.push_back(static_cast<int>(k));
    } else {
      r.per_commodity.push_back(ex.longest / ex.shortest);
    }
  }
  return finish(std::move(r), agg, 1.0);
}

MetricReport envy_free_unfairness(const Network& net, const FlowState& fs, Aggregate agg) {
  check_state(net, fs);
  MetricReport r;
  r.metric = "envy_free";
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    if (fs.paths[k].empty())
      throw DecompositionError("commodity " + std::to_string(k) + ": no recorded paths");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& p : fs.paths[k]) {
      double t = path_time(net, fs, p.edges);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    if (lo <= kDegenerate) {
      r.per_commodity.push_back(kNaN);
      r.excluded.push_back(static_cast<int>(k));
    } else {
      r.per_commodity.push_back(hi / lo);
    }
  }
  return finish(std::move(r), agg, 1.0);
}

MetricReport used_nash_unfairness(const Network& net, const FlowState& fs, Aggregate agg) {
  check_state(net, fs);
  MetricReport r;
  r.metric = "used_nash";
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    if (fs.paths[k].empty())
      throw DecompositionError("commodity " + std::to_string(k) + ": no recorded paths");
    CommodityDag dag = build_commodity_dag(net, fs, static_cast<int>(k));
    DagPathExtremes ex = dag_path_extremes(net, fs, dag);
    double hi = 0.0;
    for (const auto& p : fs.paths[k]) hi = std::max(hi, path_time(net, fs, p.edges));
    if (ex.shortest <= kDegenerate) {
      r.per_commodity.push_back(kNaN);
      r.excluded.push_back(static_cast<int>(k));
    } else {
      r.per_commodity.push_back(hi / ex.shortest);
    }
  }
  return finish(std::move(r), agg, 1.0);
}

MetricReport gini_coefficient(const Network& net, const FlowState& fs, Aggregate agg) {
  check_state(net, fs);
  MetricReport r;
  r.metric = "gini";
  for (size_t k = 0; k < net.commodities.size(); ++k) {
    const auto& paths = fs.paths[k];
    if (paths.empty())
      throw DecompositionError("commodity " + std::to_string(k) + ": no recorded paths");
    const double demand = net.commodities[k].demand;
    std::vector<double> t(paths.size());
    for (size_t i = 0; i < paths.size(); ++i) t[i] = path_time(net, fs, paths[i].edges);
    double mean_abs = 0.0, weighted_time = 0.0;
    for (size_t i = 0; i < paths.size(); ++i) {
      weighted_time += paths[i].weight * t[i];
      for (size_t j = 0; j < paths.size(); ++j)
        mean_abs += paths[i].weight * paths[j].weight * std::abs(t[i] - t[j]);
    }
    double denom = 2.0 * demand * weighted_time;
    if (denom <= kDegenerate) {
      r.per_commodity.push_back(kNaN);
      r.excluded.push_back(static_cast<int>(k));
    } else {
      r.per_commodity.push_back(mean_abs / denom);
    }
  }
  return finish(std::move(r), agg, 0.0);
}

std::string metrics_to_csv(const std::vector<MetricReport>& reports) {
  std::ostringstream os;
  os << "metric,commodity,value\n";
  for (const auto& r : reports) {
    for (size_t k = 0; k < r.per_commodity.size(); ++k) {
      if (std::isnan(r.per_commodity[k])) continue;
      os << r.metric << ',' << k << ',' << fmt12(r.per_commodity[k]) << '\n';
    }
    os << r.metric << ",aggregate," << fmt12(r.aggregate) << '\n';
  }
  return os.str();
}

std::string metrics_to_json(const std::vector<MetricReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json jr;
    jr["metric"] = r.metric;
    jr["aggregate"] = r.aggregate;
    nlohmann::json per = nlohmann::json::array();
    for (double v : r.per_commodity)
      per.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
    jr["per_commodity"] = per;
    jr["excluded"] = r.excluded;
    j.push_back(jr);
  }
  return j.dump(2);
}

}  // namespace fairflow
