#pragma once

#include <stdexcept>
#include <string>

namespace hookwalk {

//! Malformed input: invalid diagram, bad measure, out-of-range argument.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! A point or parameter outside the domain where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

//! Iterative numerics failed to reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous_estimate,
                   double last_estimate)
      : std::runtime_error(what),
        previous_(previous_estimate),
        last_(last_estimate) {}

  double previous_estimate() const noexcept { return previous_; }
  double last_estimate() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace hookwalk
