#pragma once

#include <stdexcept>
#include <string>

namespace pendinv {

// Input outside the region where a quantity is defined (exit code 2 in the CLI).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Mismatched variable labels in series arithmetic.
class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Series substitution or inversion preconditions violated.
class SeriesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two independent derivations disagree (exit code 1 in the CLI).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative procedure failed to converge or bracket a root.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pendinv
