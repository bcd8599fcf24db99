#pragma once

#include <string>
#include <vector>

#include "fairflow/flow_state.hpp"
#include "fairflow/network.hpp"

namespace fairflow {

enum class Aggregate { kMax, kMean };

struct MetricReport {
  std::string metric;
  std::vector<double> per_commodity;  // NaN for excluded commodities
  std::vector<int> excluded;          // degenerate (near-zero shortest time)
  double aggregate = 0.0;
};

// Ratio of longest to shortest positive-flow path per commodity, evaluated on
// the commodity DAG under total-flow travel times. The headline metric.
MetricReport unfairness_u(const Network& net, const FlowState& fs,
                          Aggregate agg = Aggregate::kMax);

// max/min travel time over the commodity's recorded paths.
MetricReport envy_free_unfairness(const Network& net, const FlowState& fs,
                                  Aggregate agg = Aggregate::kMax);

// max recorded-path travel time over the DAG shortest path.
MetricReport used_nash_unfairness(const Network& net, const FlowState& fs,
                                  Aggregate agg = Aggregate::kMax);

// Flow-weighted Gini coefficient of recorded-path travel times.
MetricReport gini_coefficient(const Network& net, const FlowState& fs,
                              Aggregate agg = Aggregate::kMax);

std::string metrics_to_csv(const std::vector<MetricReport>& reports);
std::string metrics_to_json(const std::vector<MetricReport>& reports);

}  // namespace fairflow
