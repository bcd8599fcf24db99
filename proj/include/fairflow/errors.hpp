#pragma once

#include <stdexcept>
#include <string>

namespace fairflow {

// Input-side failures (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query-time failures (CLI exit code 3).
struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RestrictionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EnforceabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fairflow
