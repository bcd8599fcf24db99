#include "fairflow/travel_time.hpp"

#include <cmath>
#include <stdexcept>

#include "fairflow/errors.hpp"

namespace fairflow {

TravelTimeFn::TravelTimeFn(std::vector<double> coef) : coef_(std::move(coef)) {
  while (coef_.size() > 1 && coef_.back() == 0.0) coef_.pop_back();
  if (coef_.empty()) coef_.push_back(0.0);
}

TravelTimeFn TravelTimeFn::bpr(double free_flow_time, double capacity) {
  return bpr(free_flow_time, capacity, 0.15, 4);
}

TravelTimeFn TravelTimeFn::bpr(double free_flow_time, double capacity, double b, int power) {
  if (capacity <= 0.0) throw InstanceError("bpr: capacity must be positive");
  if (power < 0) throw InstanceError("bpr: power must be a nonnegative integer");
  if (b < 0.0) throw InstanceError("bpr: b must be nonnegative");
  std::vector<double> coef(static_cast<size_t>(power) + 1, 0.0);
  coef[0] = free_flow_time;
  coef[static_cast<size_t>(power)] += free_flow_time * b / std::pow(capacity, power);
  return TravelTimeFn(std::move(coef));
}

double TravelTimeFn::value(double x) const {
  double v = 0.0;
  for (size_t i = coef_.size(); i-- > 0;) v = v * x + coef_[i];
  return v;
}

double TravelTimeFn::derivative(double x) const {
  double v = 0.0;
  for (size_t i = coef_.size(); i-- > 1;) v = v * x + coef_[i] * static_cast<double>(i);
  return v;
}

double TravelTimeFn::second_derivative(double x) const {
  double v = 0.0;
  for (size_t i = coef_.size(); i-- > 2;)
    v = v * x + coef_[i] * static_cast<double>(i) * static_cast<double>(i - 1);
  return v;
}

double TravelTimeFn::antiderivative(double x) const {
  double v = 0.0;
  for (size_t i = coef_.size(); i-- > 0;)
    v = v * x + coef_[i] / static_cast<double>(i + 1);
  return v * x;
}

double TravelTimeFn::interpolated_cost(double x, double alpha) const {
  return value(x) + alpha * x * derivative(x);
}

}  // namespace fairflow
