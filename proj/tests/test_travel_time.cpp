#include <cmath>
#include <vector>

#include "doctest.h"
#include "fairflow/errors.hpp"
#include "fairflow/travel_time.hpp"

using namespace fairflow;

TEST_CASE("standard congestion curve hits its anchor points") {
  // xi*(1 + 0.15 (x/kappa)^4): free-flow at zero, +15% at capacity.
  TravelTimeFn fn = TravelTimeFn::bpr(2.0, 10.0);
  CHECK(fn.value(0.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fn.value(10.0) == doctest::Approx(2.3).epsilon(1e-12));
  CHECK(fn.degree() == 4);
}

TEST_CASE("derivatives agree with central differences") {
  TravelTimeFn fn = TravelTimeFn::bpr(3.5, 120.0, 0.2, 3);
  for (double x : {0.0, 10.0, 55.0, 120.0, 300.0}) {
    double h = 1e-5 * (1.0 + x);
    double fd1 = (fn.value(x + h) - fn.value(x - h)) / (2.0 * h);
    double fd2 = (fn.derivative(x + h) - fn.derivative(x - h)) / (2.0 * h);
    CHECK(std::abs(fn.derivative(x) - fd1) <= 1e-6 * (1.0 + std::abs(fd1)));
    CHECK(std::abs(fn.second_derivative(x) - fd2) <= 1e-6 * (1.0 + std::abs(fd2)));
  }
}

TEST_CASE("antiderivative matches midpoint quadrature") {
  TravelTimeFn fn = TravelTimeFn::bpr(1.0, 2.0);
  double upto = 3.0;
  int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += fn.value((i + 0.5) * upto / n) * (upto / n);
  CHECK(fn.antiderivative(upto) == doctest::Approx(sum).epsilon(1e-8));
  CHECK(fn.antiderivative(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("blended edge cost: linear and congestion-curve spot values") {
  // t(x) = x at x = 2/3, half blend: 2/3 + 0.5*(2/3)*1 = 1.
  TravelTimeFn linear(std::vector<double>{0.0, 1.0});
  CHECK(linear.interpolated_cost(2.0 / 3.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  // unit BPR at capacity, full blend: 1.15 + 1*1*0.6 = 1.75.
  TravelTimeFn unit = TravelTimeFn::bpr(1.0, 1.0);
  CHECK(unit.value(1.0) == doctest::Approx(1.15).epsilon(1e-12));
  CHECK(unit.derivative(1.0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(unit.interpolated_cost(1.0, 1.0) == doctest::Approx(1.75).epsilon(1e-12));
  // zero blend reduces to the plain travel time
  CHECK(unit.interpolated_cost(1.0, 0.0) == doctest::Approx(1.15).epsilon(1e-12));
}

TEST_CASE("trailing zero coefficients do not inflate the degree") {
  TravelTimeFn fn(std::vector<double>{2.0, 0.0, 0.0});
  CHECK(fn.degree() == 0);
  CHECK(fn.value(100.0) == doctest::Approx(2.0).epsilon(1e-12));
  TravelTimeFn empty{};
  CHECK(empty.degree() == 0);
  CHECK(empty.value(5.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("malformed congestion parameters are rejected") {
  CHECK_THROWS_AS(TravelTimeFn::bpr(1.0, 0.0), InstanceError);
  CHECK_THROWS_AS(TravelTimeFn::bpr(1.0, -2.0), InstanceError);
  CHECK_THROWS_AS(TravelTimeFn::bpr(1.0, 1.0, -0.1, 4), InstanceError);
  CHECK_THROWS_AS(TravelTimeFn::bpr(1.0, 1.0, 0.15, -1), InstanceError);
}

TEST_CASE("zero power folds the surcharge into the constant") {
  TravelTimeFn fn = TravelTimeFn::bpr(2.0, 5.0, 0.5, 0);
  CHECK(fn.degree() == 0);
  CHECK(fn.value(42.0) == doctest::Approx(3.0).epsilon(1e-12));
}
