#pragma once

#include <stdexcept>
#include <string>

namespace ccwb {

// Invalid user-supplied parameters (CLI exit code 2).
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// File and stream problems (CLI exit code 1).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural certificate failed re-validation.
struct validation_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ccwb
