#pragma once

#include <stdexcept>
#include <string>

namespace spde {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid or inconsistent configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Ill-conditioned linear algebra or non-finite intermediate results.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An optimizer could not produce an acceptable point.
class OptimizerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested allocation exceeds the configured memory cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spde
