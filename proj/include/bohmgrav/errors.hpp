#pragma once

#include <stdexcept>
#include <string>

namespace bohmgrav {

// Thrown when an iterative scheme fails to reach its tolerance
// (integration, bisection bracket, relaxation stagnation, ...).
// Domain/precondition violations use std::domain_error instead.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bohmgrav
