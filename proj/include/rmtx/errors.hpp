#pragma once

#include <stdexcept>
#include <string>

namespace rmtx {

/// Parameter outside the domain of an operation (bad a, negative argument, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Dimension or parity mismatch between an input and what an operation needs.
class ParityError : public DomainError {
public:
    explicit ParityError(const std::string& what) : DomainError(what) {}
};

/// Requested size beyond a hard limit (recursive Pfaffian, polynomial degree, kernel n).
class SizeError : public DomainError {
public:
    explicit SizeError(const std::string& what) : DomainError(what) {}
};

/// Result not representable in double precision.
class RangeError : public DomainError {
public:
    explicit RangeError(const std::string& what) : DomainError(what) {}
};

/// An iterative method stopped before meeting its tolerance.
/// Carries the best estimate so callers may still inspect it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error() const { return error_; }

private:
    double estimate_;
    double error_;
};

}  // namespace rmtx
