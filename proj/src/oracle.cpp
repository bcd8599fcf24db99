#include "fairflow/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace fairflow {

namespace {

// marginal/average blend on the two canonical edges
double c1(double x1, double eps, double alpha) { return 1.0 + eps * x1 * (1.0 + alpha); }
double c2(double x2, int m, double alpha) {
  return (1.0 + m * alpha) * std::pow(x2, m);
}

}  // namespace

PigouSolution pigou_solve(int m, double eps, double demand, double alpha) {
  if (m < 0) throw std::invalid_argument("pigou_solve: m must be nonnegative");
  if (eps < 0.0) throw std::invalid_argument("pigou_solve: eps must be nonnegative");
  if (!(demand > 0.0)) throw std::invalid_argument("pigou_solve: demand must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("pigou_solve: alpha must lie in [0,1]");

  // r(x2) = c2(x2) - c1(d - x2) is nondecreasing; its root is the optimal split
  auto residual = [&](double x2) { return c2(x2, m, alpha) - c1(demand - x2, eps, alpha); };
  double x2;
  if (residual(demand) <= 0.0) {
    x2 = demand;  // boundary tie resolves toward the second edge
  } else if (residual(0.0) >= 0.0) {
    x2 = 0.0;
  } else {
    double lo = 0.0, hi = demand;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double r = residual(mid);
      if (std::abs(r) <= 1e-12) {
        lo = hi = mid;
        break;
      }
      if (r < 0.0)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-16 * demand) break;
    }
    x2 = 0.5 * (lo + hi);
  }

  PigouSolution sol;
  sol.x2 = x2;
  sol.x1 = demand - x2;
  double t1 = 1.0 + eps * sol.x1;
  double t2 = std::pow(x2, m);
  sol.total_time = sol.x1 * t1 + sol.x2 * t2;
  sol.ratio = (sol.x1 > 0.0 && sol.x2 > 0.0 && t2 > 0.0) ? t1 / t2 : 1.0;
  sol.kkt_residual =
      (x2 > 0.0 && x2 < demand) ? std::abs(residual(x2)) : std::max(0.0, residual(demand));
  return sol;
}

std::vector<double> grid_search_optimum(const Network& net, double alpha, double resolution) {
  const size_t E = net.edges.size();
  if (net.vertex_count != 2 || net.commodities.size() != 1 || E < 2 || E > 3)
    throw std::invalid_argument(
        "grid_search_optimum: needs a parallel single-commodity network with 2 or 3 edges");
  for (const auto& e : net.edges)
    if (e.tail != 0 || e.head != 1)
      throw std::invalid_argument("grid_search_optimum: edges must run origin->destination");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_search_optimum: bad resolution");
  const double d = net.commodities[0].demand;
  const long n = std::max<long>(1, std::lround(d / resolution));

  auto objective = [&](const std::vector<double>& x) {
    double h_so = 0.0, h_ue = 0.0;
    for (size_t e = 0; e < E; ++e) {
      h_so += x[e] * net.edges[e].fn.value(x[e]);
      h_ue += net.edges[e].fn.antiderivative(x[e]);
    }
    return alpha * h_so + (1.0 - alpha) * h_ue;
  };

  std::vector<double> best;
  double best_obj = 0.0;
  std::vector<double> x(E, 0.0);
  if (E == 2) {
    for (long i = 0; i <= n; ++i) {
      x[1] = d * static_cast<double>(i) / static_cast<double>(n);
      x[0] = d - x[1];
      double obj = objective(x);
      if (best.empty() || obj <= best_obj) {  // ties keep the later grid point
        best = x;
        best_obj = obj;
      }
    }
  } else {
    for (long i = 0; i <= n; ++i) {
      x[1] = d * static_cast<double>(i) / static_cast<double>(n);
      for (long jj = 0; jj <= n - i; ++jj) {
        x[2] = d * static_cast<double>(jj) / static_cast<double>(n);
        x[0] = d - x[1] - x[2];
        double obj = objective(x);
        if (best.empty() || obj <= best_obj) {
          best = x;
          best_obj = obj;
        }
      }
    }
  }
  return best;
}

PigouBetaSo pigou_beta_so(int m, double eps, double demand, double beta, double resolution) {
  if (!(beta >= 1.0)) throw std::invalid_argument("pigou_beta_so: beta must be at least 1");
  if (!(demand > 0.0)) throw std::invalid_argument("pigou_beta_so: demand must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("pigou_beta_so: bad resolution");
  const long n = std::max<long>(1, std::lround(demand / resolution));
  PigouBetaSo best;
  bool have = false;
  for (long i = 0; i <= n; ++i) {
    double x2 = demand * static_cast<double>(i) / static_cast<double>(n);
    double x1 = demand - x2;
    double t1 = 1.0 + eps * x1;
    double t2 = std::pow(x2, m);
    double u = 1.0;
    if (x1 > 0.0 && x2 > 0.0) {
      if (!(t2 > 0.0)) continue;  // infinite ratio: infeasible for any finite beta
      u = std::max(t1 / t2, t2 / t1);
    }
    if (u > beta + 1e-12) continue;
    double tt = x1 * t1 + x2 * t2;
    if (!have || tt <= best.total_time) {  // ties resolve toward the second edge
      best = {x1, x2, tt, u};
      have = true;
    }
  }
  return best;
}

}  // namespace fairflow
