#pragma once

#include <stdexcept>
#include <string>

namespace pcplace {

/// Raised when an LU factorization meets a pivot it cannot recover from.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arnoldi breakdown with a residual still above tolerance.
class BreakdownError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The shape map folded over itself (nonpositive Jacobian determinant).
class DegenerateMapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gram matrix could not be factored even after jitter escalation.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pcplace
