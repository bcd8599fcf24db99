#include "fairflow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fairflow/csvio.hpp"
#include "fairflow/errors.hpp"
#include "fairflow/fairness.hpp"

namespace fairflow {

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

SweepRecord record_from_state(const Network& net, const FlowState& fs) {
  SweepRecord r;
  r.alpha = fs.alpha;
  r.h_so = fs.h_so;
  r.h_ue = fs.h_ue;
  r.gap = fs.relative_gap;
  r.u = unfairness_u(net, fs).aggregate;
  r.envy_free = envy_free_unfairness(net, fs).aggregate;
  r.used_nash = used_nash_unfairness(net, fs).aggregate;
  r.gini = gini_coefficient(net, fs).aggregate;
  return r;
}

void finish_sweep(SweepResult& out, bool keep_states) {
  double ref = 0.0;
  for (size_t i = 0; i < out.records.size(); ++i)
    ref = (i == 0) ? out.records[i].h_so : std::min(ref, out.records[i].h_so);
  out.so_reference = ref;
  for (auto& r : out.records) r.ineff_ratio = ref > 0.0 ? r.h_so / ref : 1.0;
  for (size_t i = 1; i < out.records.size(); ++i)
    if (std::abs(out.records[i].u - out.records[i - 1].u) > 0.1)
      out.outliers.push_back({out.records[i - 1].alpha, out.records[i].alpha});
  if (!keep_states) out.states.clear();
}

}  // namespace

std::vector<double> alpha_grid(double step) {
  if (!(step > 0.0 && step <= 1.0))
    throw std::invalid_argument("alpha_grid: step must lie in (0,1]");
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    double a = static_cast<double>(i) * step;
    if (a >= 1.0 - 1e-12) break;
    grid.push_back(a);
  }
  grid.push_back(1.0);  // both endpoints are always exact
  return grid;
}

SweepResult dense_sweep(const Network& net, double step, const SolverConfig& cfg, int jobs,
                        bool keep_states) {
  auto grid = alpha_grid(step);
  SweepResult out;
  out.records.resize(grid.size());
  out.states.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
    FlowState fs = solve(net, grid[static_cast<size_t>(i)], cfg);
    out.records[static_cast<size_t>(i)] = record_from_state(net, fs);
    out.states[static_cast<size_t>(i)] = std::move(fs);
  });
  finish_sweep(out, keep_states);
  return out;
}

SweepResult i_solution_sweep(const Network& net, double step, const SolverConfig& cfg,
                             int jobs, bool keep_states) {
  auto grid = alpha_grid(step);
  FlowState ue = solve(net, 0.0, cfg);
  FlowState so = solve(net, 1.0, cfg);
  const size_t E = net.edges.size();
  const size_t K = net.commodities.size();
  SweepResult out;
  out.records.resize(grid.size());
  out.states.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
    double g = grid[static_cast<size_t>(i)];
    FlowState fs;
    fs.alpha = g;
    fs.edge_flow.resize(E);
    for (size_t e = 0; e < E; ++e)
      fs.edge_flow[e] = (1.0 - g) * ue.edge_flow[e] + g * so.edge_flow[e];
    fs.commodity_flow.assign(K, std::vector<double>(E, 0.0));
    fs.paths.resize(K);
    for (size_t k = 0; k < K; ++k) {
      for (size_t e = 0; e < E; ++e)
        fs.commodity_flow[k][e] =
            (1.0 - g) * ue.commodity_flow[k][e] + g * so.commodity_flow[k][e];
      // union of the endpoint path sets with interpolated weights
      std::map<std::vector<int>, double> mix;
      for (const auto& p : ue.paths[k])
        if ((1.0 - g) * p.weight > 0.0) mix[p.edges] += (1.0 - g) * p.weight;
      for (const auto& p : so.paths[k])
        if (g * p.weight > 0.0) mix[p.edges] += g * p.weight;
      for (const auto& [edges, w] : mix) fs.paths[k].push_back({edges, w});
    }
    Objectives obj = objective_values(net, fs.edge_flow, g);
    fs.h_so = obj.h_so;
    fs.h_ue = obj.h_ue;
    fs.h_interp = obj.h_interp;
    // distance from the corresponding interpolated optimum, for the record
    fs.relative_gap = relative_gap(net, fs.edge_flow, g);
    out.records[static_cast<size_t>(i)] = record_from_state(net, fs);
    out.states[static_cast<size_t>(i)] = std::move(fs);
  });
  finish_sweep(out, keep_states);
  return out;
}

namespace {

double gated_metric(const SweepRecord& r, GateMetric gate) {
  switch (gate) {
    case GateMetric::kU: return r.u;
    case GateMetric::kEnvyFree: return r.envy_free;
    case GateMetric::kUsedNash: return r.used_nash;
    case GateMetric::kGini: return r.gini;
  }
  return r.u;
}

const SweepRecord& endpoint(const std::vector<SweepRecord>& records, double alpha,
                            const char* who) {
  for (const auto& r : records)
    if (r.alpha == alpha) return r;
  throw std::invalid_argument(std::string(who) + ": records must include alpha=" +
                              (alpha == 0.0 ? "0" : "1"));
}

}  // namespace

ParetoPoint select_beta_so(const std::vector<SweepRecord>& records, double beta,
                           GateMetric gate, double slack, const std::string& method) {
  if (records.empty()) throw std::invalid_argument("select_beta_so: no records");
  if (!(beta >= 1.0)) throw std::invalid_argument("select_beta_so: beta must be at least 1");
  const SweepRecord* best = nullptr;
  for (const auto& r : records) {
    // alpha=0 is the guaranteed-fair fallback and always qualifies
    if (r.alpha != 0.0 && gated_metric(r, gate) > beta + slack) continue;
    if (!best || r.h_so < best->h_so) best = &r;  // ties keep the smaller alpha
  }
  ParetoPoint p;
  p.beta = beta;
  p.method = method;
  p.param = best->alpha;
  p.ineff_ratio = best->ineff_ratio;
  p.unfairness = gated_metric(*best, gate);
  return p;
}

std::vector<ParetoPoint> pareto_frontier(const std::vector<SweepRecord>& records,
                                         const std::vector<double>& betas, GateMetric gate,
                                         double slack, const std::string& method) {
  std::vector<double> sorted = betas;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ParetoPoint> out;
  out.reserve(sorted.size());
  for (double b : sorted) out.push_back(select_beta_so(records, b, gate, slack, method));
  return out;
}

double poa_upper(const std::vector<SweepRecord>& records) {
  const SweepRecord& ue = endpoint(records, 0.0, "poa_upper");
  const SweepRecord& so = endpoint(records, 1.0, "poa_upper");
  if (!(so.h_so > 0.0)) throw std::invalid_argument("poa_upper: degenerate instance");
  return ue.h_so / so.h_so;
}

double ineff_bound(const std::vector<SweepRecord>& records, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ineff_bound: alpha must lie strictly inside (0,1)");
  const SweepRecord& ue = endpoint(records, 0.0, "ineff_bound");
  const SweepRecord& so = endpoint(records, 1.0, "ineff_bound");
  if (!(so.h_so > 0.0)) throw std::invalid_argument("ineff_bound: degenerate instance");
  double drift = so.h_ue - ue.h_ue;
  double second = 1.0 + (1.0 - alpha) / alpha * drift / so.h_so;
  return std::min(ue.h_so / so.h_so, second);
}

double alpha_star_crossover(const std::vector<SweepRecord>& records) {
  const SweepRecord& ue = endpoint(records, 0.0, "alpha_star_crossover");
  const SweepRecord& so = endpoint(records, 1.0, "alpha_star_crossover");
  double drift = so.h_ue - ue.h_ue;
  double denom = ue.h_so + drift;
  if (!(std::abs(denom) > 1e-300))
    throw std::invalid_argument("alpha_star_crossover: degenerate instance");
  if (drift <= 0.0) return 0.0;  // endpoints coincide
  return drift / denom;
}

double feasible_alpha(const Network& net, double beta) {
  if (!(beta >= 1.0)) throw std::invalid_argument("feasible_alpha: beta must be at least 1");
  int m = net.max_degree();
  if (m == 0) return 1.0;  // constant travel times are fair at any blend
  return std::min(1.0, (beta - 1.0) / static_cast<double>(m));
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "alpha,h_so,h_ue,ineff_ratio,gap,u,envy_free,used_nash,gini\n";
  for (const auto& r : records) {
    os << fmt12(r.alpha) << ',' << fmt12(r.h_so) << ',' << fmt12(r.h_ue) << ','
       << fmt12(r.ineff_ratio) << ',' << fmt12(r.gap) << ',' << fmt12(r.u) << ','
       << fmt12(r.envy_free) << ',' << fmt12(r.used_nash) << ',' << fmt12(r.gini) << '\n';
  }
  return os.str();
}

std::vector<SweepRecord> sweep_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) ||
      line != "alpha,h_so,h_ue,ineff_ratio,gap,u,envy_free,used_nash,gini")
    throw ParseError("sweep_from_csv: unexpected header");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (vals.size() != 9) throw ParseError("sweep_from_csv: bad row");
    out.push_back({vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7],
                   vals[8]});
  }
  return out;
}

std::string pareto_to_csv(const std::vector<ParetoPoint>& points) {
  std::ostringstream os;
  os << "beta,method,param,ineff_ratio,unfairness\n";
  for (const auto& p : points)
    os << fmt12(p.beta) << ',' << p.method << ',' << fmt12(p.param) << ','
       << fmt12(p.ineff_ratio) << ',' << fmt12(p.unfairness) << '\n';
  return os.str();
}

}  // namespace fairflow
