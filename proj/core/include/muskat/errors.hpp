#pragma once

#include <stdexcept>
#include <string>

namespace muskat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Input outside the class an operation can handle (e.g. non-decaying field).
class DomainError : public Error {
public:
    using Error::Error;
};

// A norm or integral diverges under the field's asymptotic models.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::string end)
        : Error(what), end_(std::move(end)) {}
    const std::string& end() const { return end_; }

private:
    std::string end_;
};

// Refinement estimate exceeded the tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double tolerance, long node = -1)
        : Error(what), estimate_(estimate), tolerance_(tolerance), node_(node) {}
    double estimate() const { return estimate_; }
    double tolerance() const { return tolerance_; }
    long node() const { return node_; }

private:
    double estimate_;
    double tolerance_;
    long node_;
};

// Two independent representations disagree.
class ConsistencyError : public Error {
public:
    ConsistencyError(const std::string& what, double mismatch) : Error(what), mismatch_(mismatch) {}
    double mismatch() const { return mismatch_; }

private:
    double mismatch_;
};

}  // namespace muskat
