#pragma once

#include <stdexcept>
#include <string>

namespace eex {

// Malformed or inconsistent input data (bad TSV line, conflicting
// observation, non-positive weight, ...). Messages carry file:line
// context where available. Maps to exit code 2 at the CLI boundary.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or misuse of an operation. Maps to exit code 1.
using UsageError = std::invalid_argument;

}  // namespace eex
