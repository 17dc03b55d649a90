#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

// Input outside the domain of a geometric or special-function formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An integral or image sum failed to reach its tolerance within its cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (unknown keys, out-of-range parameters).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal cross-check between two evaluation routes disagreed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace harvest
