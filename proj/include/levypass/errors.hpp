#pragma once

#include <stdexcept>
#include <string>

namespace levypass {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad JSON, invalid component parameters, inconsistent config.
struct ConfigError : Error {
    using Error::Error;
};

/// Evaluation requested outside the region where a formula is defined
/// (argument outside the exponential-moment strip, transform abscissa past a
/// pole, x = 0 in the inversion contour, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Request falls outside a method's hypotheses (wrong sign of the mean,
/// negative jumps where only positive ones are supported, ...).
struct HypothesisError : Error {
    using Error::Error;
};

/// phi(q) = theta has no root in the admissible bracket.
struct NoRootError : HypothesisError {
    using HypothesisError::HypothesisError;
};

/// An iteration or summation failed to reach its accuracy target.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace levypass
