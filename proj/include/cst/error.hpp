#pragma once

#include <stdexcept>
#include <string>

namespace cst {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Array dimensions that do not agree.
class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent configuration.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// File or format failure.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown (singular system, failed root bracket, ...).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace cst
