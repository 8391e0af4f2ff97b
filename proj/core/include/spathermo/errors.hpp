#pragma once

#include <stdexcept>
#include <string>

namespace spathermo {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input lies outside the mathematical domain of an operation: invalid
/// probabilities, deformation-map argument outside the map's interval,
/// non-positive order parameters, mismatched lengths.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested internal energy cannot be met by any distribution on the
/// given spectrum (U outside the open interval (min eps, max eps)).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Root bracketing or iteration failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Two redundant computation routes disagreed beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// The heat-capacity transform condition h'(R) != h''(R)*C is violated;
/// carries the offending margin h'(R) - h''(R)*C.
class HcViolationError : public Error {
public:
    HcViolationError(const std::string& msg, double margin_)
        : Error(msg), margin(margin_) {}
    double margin;
};

} // namespace spathermo
