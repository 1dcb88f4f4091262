#pragma once

#include <stdexcept>
#include <string>

namespace relent {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input: dimension mismatch, broken invariant, malformed file.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// A scalar function was evaluated outside its domain. Carries the
// offending eigenvalue so callers can report it.
class DomainError : public Error {
public:
    DomainError(const std::string& msg, double offending)
        : Error(msg), offending_(offending) {}
    double offending_value() const { return offending_; }

private:
    double offending_;
};

// Quadrature failed to reach the requested tolerance. Carries the best
// estimate obtained so far together with its error estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, double best_value, double error_estimate)
        : Error(msg), best_value_(best_value), error_estimate_(error_estimate) {}
    double best_value() const { return best_value_; }
    double error_estimate() const { return error_estimate_; }

private:
    double best_value_;
    double error_estimate_;
};

}  // namespace relent
