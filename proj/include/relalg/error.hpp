#pragma once

#include <stdexcept>
#include <string>

namespace relalg {

/// Thrown for contract violations: bad arities, signature mismatches,
/// out-of-range elements, exceeded enumeration bounds.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by enumerations when the configured carrier bound is exceeded.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace relalg
