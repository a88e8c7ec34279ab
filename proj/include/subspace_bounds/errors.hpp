#pragma once

#include <stdexcept>

namespace sbounds {

/// Argument outside the validity domain of an estimating function or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method ran out of its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed inputs that violate a hypothesis of the requested check,
/// e.g. a partition splitting an eigenvalue cluster or an ambiguous enclosure.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sbounds
