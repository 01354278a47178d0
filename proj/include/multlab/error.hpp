#pragma once

#include <stdexcept>
#include <string>

namespace multlab {

// Bad parameters, malformed JSON, unsatisfiable configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the range covered by a table (usually the sieve limit).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Mathematical precondition violated (zero where a unit is required, etc.).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input that is well formed but outside what the exact machinery handles.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A closed form hits a vanishing denominator.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Normalization constant vanishes (e.g. G(1) = 0).
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input too large for an exhaustive routine.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace multlab
