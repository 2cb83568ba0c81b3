#pragma once

#include <stdexcept>
#include <string>

namespace ggiw {

/// Input outside an operation's mathematical domain (non-PSD matrix,
/// undefined moment, inconsistent cardinalities, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An exhaustive enumeration would exceed the configured event cap.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Malformed or invalid experiment / scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ggiw
