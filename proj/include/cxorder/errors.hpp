#pragma once

#include <stdexcept>
#include <string>

namespace cxorder {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raw data could not be turned into a Sample (empty, NaN, infinite).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A test configuration that cannot be run as specified, e.g. too few
/// tail-eligible indices or an index with an undefined bound.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Missing or inconsistent user configuration (custom families, CLI flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cxorder
