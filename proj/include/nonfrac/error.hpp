#pragma once

#include <stdexcept>
#include <string>

namespace nonfrac {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series or iteration failed to converge within its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Buffer length unsupported by a transform.
class LengthError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Linear system numerically singular.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coarse search found no interior minimum.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace nonfrac
