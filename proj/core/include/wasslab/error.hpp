#pragma once

#include <stdexcept>
#include <string>

namespace wasslab {

// Malformed input file or unreadable/unwritable path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration budget without meeting its
// optimality or feasibility test.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance exceeds a configured size cap (e.g. exact OT above 512 atoms).
class CapacityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wasslab
