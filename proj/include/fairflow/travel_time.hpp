#pragma once

#include <vector>

namespace fairflow {

// Polynomial link travel time t(x) = sum_i coef[i] x^i.
// Coefficients are expected nonnegative so t is nondecreasing on x >= 0;
// validate() reports violations instead of the constructor rejecting them.
class TravelTimeFn {
 public:
  TravelTimeFn() : coef_{0.0} {}
  explicit TravelTimeFn(std::vector<double> coef);

  // BPR form xi * (1 + b (x/capacity)^power); the two-argument overload uses
  // the customary b = 0.15, power = 4.
  static TravelTimeFn bpr(double free_flow_time, double capacity);
  static TravelTimeFn bpr(double free_flow_time, double capacity, double b, int power);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  // Integral of t from 0 to x (closed form).
  double antiderivative(double x) const;
  // t(x) + alpha * x * t'(x): the marginal/average blend used by the solver.
  double interpolated_cost(double x, double alpha) const;

  // Highest power with a nonzero coefficient; 0 for a constant.
  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coef_; }

  bool operator==(const TravelTimeFn& o) const { return coef_ == o.coef_; }

 private:
  std::vector<double> coef_;
};

}  // namespace fairflow
