#pragma once

#include <stdexcept>
#include <string>

namespace ssrqec {

// A configured size or enumeration guard would be exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed (e.g. a ground space of the wrong
// dimension). Always signals a construction bug, never bad user input.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Evaluation at a kinematic singularity such as a propagator pole.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ssrqec
