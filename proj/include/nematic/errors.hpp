#pragma once

#include <stdexcept>
#include <string>

namespace nematic {

/// Invalid parameters, configuration or input data (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The time integrator hit a non-finite value or a stability violation after
/// the run started (CLI exit code 3).
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nematic
