#pragma once

#include <stdexcept>

namespace qmc {

// Caller broke a documented precondition (mismatched bases, bad flag, wrong size).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Value lies outside the mathematical domain of the operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Request exceeds the stored digit precision; never silently truncated.
struct PrecisionError : std::length_error {
    using std::length_error::length_error;
};

// Enumeration would exceed a configured guard; the message names an alternative.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qmc
